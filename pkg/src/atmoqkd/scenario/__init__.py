"""Scenario configuration, presets, sweep execution and report output."""

from atmoqkd.scenario.config import ConfigError, ScenarioConfig, dumps, load, loads
from atmoqkd.scenario.presets import PRESETS, preset
from atmoqkd.scenario.report import emit_report
from atmoqkd.scenario.runner import (MemberResult, ScenarioError, ScenarioReport, Workspace,
                                     run_scenario, run_scenario_member, run_sweep)

__all__ = [
    "ConfigError", "ScenarioConfig", "dumps", "load", "loads",
    "PRESETS", "preset", "emit_report",
    "MemberResult", "ScenarioError", "ScenarioReport", "Workspace",
    "run_scenario", "run_scenario_member", "run_sweep",
]
