import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cyclic_altafini.graph import GainGraph  # noqa: E402

# arcs of the three-vertex example: 3->1 gain 1, 1->2 gain alpha_1, 2->3 gain alpha_2
EXAMPLE_ARCS = [(3, 1, 0), (1, 2, 1), (2, 3, 2)]


def example_graph(neighbor: bool = True) -> GainGraph:
    return GainGraph.from_arcs(3, 3, EXAMPLE_ARCS, neighbor=neighbor, add_self_arcs=neighbor)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
