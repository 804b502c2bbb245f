import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from jobmarket.config import PipelineConfig  # noqa: E402
from jobmarket.pipeline import Pipeline  # noqa: E402
from jobmarket.synth import GeneratorProfile, generate_corpus  # noqa: E402

# acceptance lines collected during the run, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_corpus():
    return generate_corpus(GeneratorProfile(n_listings=1200, seed=7))


@pytest.fixture(scope="session")
def default_corpus():
    return generate_corpus(GeneratorProfile(n_listings=20000, seed=42))


SMALL_CONFIG = {
    "seed": 42,
    "generator": {"n_listings": 2000},
    "svr": {"epochs": 20},
    "logreg": {"max_iter": 150},
}


@pytest.fixture(scope="session")
def small_config_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "small.json"
    path.write_text(json.dumps(SMALL_CONFIG), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def small_run(small_config_path, tmp_path_factory):
    """A finished paper-matrix run on the small config: (pipeline, summary)."""
    out = tmp_path_factory.mktemp("small_run")
    pipe = Pipeline(PipelineConfig.load(small_config_path, out_dir=str(out)))
    return pipe, pipe.run_paper_matrix()
