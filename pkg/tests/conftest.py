"""
osmoflow - Shared test fixtures
"""

import pytest

from config.run_config import RunConfig
from core.logger import Logger
from eos.workflow_description import build_eos_workflow
from ontology.builtin import load_builtin_vocabulary
from workflow.examples import coupled_processing_workflow, post_processing_workflow


@pytest.fixture(scope='session')
def builtin_vocab():
    return load_builtin_vocabulary(Logger())


@pytest.fixture
def vocab(builtin_vocab):
    """Writable copy of the builtin vocabulary"""
    return builtin_vocab.copy()


@pytest.fixture
def logger():
    log = Logger()
    yield log
    log.close()


@pytest.fixture
def post_wf(logger):
    return post_processing_workflow(logger)


@pytest.fixture
def coupled_wf(logger):
    return coupled_processing_workflow(logger)


@pytest.fixture
def default_config(tmp_path):
    return RunConfig(output_dir=str(tmp_path / 'results'))


@pytest.fixture
def eos_wf(default_config, logger):
    return build_eos_workflow(default_config, logger)
