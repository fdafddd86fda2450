"""
osmoflow - Logger tests
"""

import logging

from core.logger import Logger


def _read(path):
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()


def test_channels_have_stable_names():
    log = Logger()
    assert log.get_logger('scheduler').name == 'osmoflow.scheduler'
    assert log.get_logger('unknown') is log.get_logger('crash')


def test_instances_do_not_share_handlers_or_leak(tmp_path):
    before = set(logging.root.manager.loggerDict)
    first = Logger(str(tmp_path / 'a'))
    second = Logger(str(tmp_path / 'b'))
    first.scheduler('[WMS-SCHEDULER] only in a')
    second.scheduler('[WMS-SCHEDULER] only in b')
    first.close()
    second.close()

    assert set(logging.root.manager.loggerDict) == before
    a = _read(first.log_files['scheduler'])
    b = _read(second.log_files['scheduler'])
    assert 'only in a' in a and 'only in b' not in a
    assert 'only in b' in b and 'only in a' not in b
