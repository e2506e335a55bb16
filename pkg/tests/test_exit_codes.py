import sys
sys.path.append('..')
from fttrpca.exit_codes import *


def test_exit_code():
    assert int(ExitCode.success) == 0
    assert int(ExitCode.file_error) == 1
    assert int(ExitCode.bad_arg) == 2
    assert int(ExitCode.user_interrupt) == 3
    assert int(ExitCode.exception) == 4
