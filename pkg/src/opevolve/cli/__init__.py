"""Scenario runner and command-line tools."""
from .chaos import ChaosReport, chaos_demo, is_bimodal, side_masses
from .config import ScenarioConfig
from .heisenberg import heisenberg_print
from .main import build_parser, main
from .scenario import RunArtifacts, execute_scenario

__all__ = [
    "ChaosReport",
    "RunArtifacts",
    "ScenarioConfig",
    "build_parser",
    "chaos_demo",
    "execute_scenario",
    "heisenberg_print",
    "is_bimodal",
    "main",
    "side_masses",
]
