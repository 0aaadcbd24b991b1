from pathlib import Path

import pytest

from profsim.gdf import document_to_graph, parse_gdf_document
from profsim.ingest import load_profiles, merge_profiles

ROOT = Path(__file__).resolve().parent.parent
WORKED = ROOT / "data" / "worked_example"

_acceptance_results = []


@pytest.fixture(scope="session")
def worked_paths():
    return {
        "graph": WORKED / "network.gdf",
        "profiles": WORKED / "profiles.csv",
        "published": WORKED / "published_scores.csv",
    }


@pytest.fixture(scope="session")
def worked_example(worked_paths):
    """(graph, schema) for the six-profile worked example."""
    profiles, schema = load_profiles(worked_paths["profiles"].read_text())
    doc = parse_gdf_document(worked_paths["graph"].read_text())
    graph = merge_profiles(document_to_graph(doc, schema), profiles)
    return graph, schema


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
