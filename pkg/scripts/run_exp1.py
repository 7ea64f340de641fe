#!/usr/bin/env python3
"""Run the proposal-submission-and-reward experiment and print the report."""

import json
import sys

from cbfm.scenarios import run_experiment_1

if __name__ == "__main__":
    report = run_experiment_1()
    print(json.dumps(report.to_dict(), indent=2))
    sys.exit(0 if report.passed else 1)
