import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from seisnorm.sweep import SweepSpec, velocity_sweep
from seisnorm.synth import three_diffractor_demo

hypothesis.settings.register_profile("default", deadline=None, max_examples=60)
hypothesis.settings.register_profile("ci", deadline=None, max_examples=300)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def demo():
    return three_diffractor_demo()


@pytest.fixture(scope="session")
def demo_section(demo):
    return demo[1]


@pytest.fixture(scope="session")
def demo_sweep(demo_section):
    return velocity_sweep(demo_section, SweepSpec())


@pytest.fixture
def rng():
    return np.random.default_rng(20260)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
