import sys
sys.path.append('..')

from fttrpca.log import *


def test_log_is_silent_when_disabled(capsys):
    disable_logging()
    assert not logging_enabled()
    log('nothing to see')
    assert capsys.readouterr().err == ''


def test_log_to_file(tmp_path):
    dest = str(tmp_path / 'debug.log')
    enable_logging(dest)
    try:
        assert logging_enabled()
        log('core shape {4, 11}')
        loglist(['first entry', 'second entry'])
    finally:
        disable_logging()
    assert not logging_enabled()
    with open(dest) as file:
        text = file.read()
    assert 'core shape {4, 11}' in text
    assert 'test_log.py:test_log_to_file' in text
    assert text.index('first entry') < text.index('second entry')
