"""Scenario files, the built-in verification battery, reports and the command line."""

from .battery import paper_scenario, paper_suite
from .report import CheckResult, Report
from .runner import run_check, run_suite
from .scenario import Issue, Scenario, ScenarioError, parse_scenario

__all__ = [
    "CheckResult", "Issue", "Report", "Scenario", "ScenarioError",
    "paper_scenario", "paper_suite", "parse_scenario", "run_check", "run_suite",
]
