#!/usr/bin/env python3
"""Solve an LP-format model with HiGHS and write a `name value` listing.

Usage: highs_solve.py MODEL.lp SOLUTION.txt
"""
import sys

import highspy


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__.strip())
    model_path, solution_path = sys.argv[1:]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    if h.readModel(model_path) != highspy.HighsStatus.kOk:
        sys.exit(f"cannot read {model_path}")
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        sys.exit(f"solver status: {h.modelStatusToString(status)}")
    lp = h.getLp()
    values = h.getSolution().col_value
    with open(solution_path, "w") as out:
        out.write(f"# objective {h.getInfo().objective_function_value}\n")
        for name, value in zip(lp.col_names_, values):
            out.write(f"{name} {value!r}\n")


if __name__ == "__main__":
    main()
