#!/usr/bin/env python3
"""Run the incentive-parameter-change experiment and print the report."""

import json
import sys

from cbfm.scenarios import run_experiment_2

if __name__ == "__main__":
    report = run_experiment_2()
    print(json.dumps(report.to_dict(), indent=2))
    sys.exit(0 if report.passed else 1)
