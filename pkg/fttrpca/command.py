'''
command.py: base class for command-line command interfaces

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

from   argparse import ArgumentParser, ArgumentTypeError
from   argparse import RawDescriptionHelpFormatter
from   inspect import cleandoc
import re
from   shutil import get_terminal_size
from   textwrap import wrap
from   validator_collection import validators

from   fttrpca import _SOLVERS
from   fttrpca.exceptions import CannotProceed
from   fttrpca.exit_codes import ExitCode
from   fttrpca.log import log
from   fttrpca.ui import alert


# Exported classes.
# .............................................................................

# Command works both for the top-level command parser created by the Main
# class in __main__.py and for subcommands.  Main must NOT call this
# __init__() in its own __init__(), because Main adds its own arguments and is
# set up differently.  Only subcommand classes invoke Command's init, using
# super().__init__().

class Command():
    '''Base class for fttrpca command-line command parsers.'''

    _name = ''

    def __init__(self, name):
        '''Create the parser that intercepts the subcommand name.'''
        usage = f'%(prog)s {name}{" " if name else ""}[subcommand]'
        parser = ArgumentParser(description = docstring_summary(self, name),
                                formatter_class = RawDescriptionHelpFormatter,
                                add_help = False, usage = usage)
        parser.add_argument('subcommand', nargs = '?', help = available_commands(self))
        self._parser = parser
        self._name = name


    def _invoke_with(self, arg_list):
        '''Invoke this command's parser on the arguments in arg_list.'''
        if not arg_list or arg_list[0] == 'help':
            self._parser.print_help()
            return

        command, args = self._parser.parse_known_args(arg_list)
        if command.subcommand:
            command_name = command.subcommand
            if command_name in command_list(self):
                log(f'dispatching to {command_name}')
                getattr(self, command_name)(args)
            else:
                alert(f'Unrecognized command: "{command_name}"')
                self._parser.print_help()
                raise CannotProceed(ExitCode.bad_arg)


    def help(self, args):
        '''Print detailed help information, and exit.'''
        usage = f'%(prog)s {self._name}{" " if self._name else ""}help [name]'
        parser = ArgumentParser(description = 'Print help', usage = usage)
        parser.add_argument('name', nargs = '?', action = 'store')
        subargs = parser.parse_args(args)
        log('printing help text')
        if subargs.name is None:
            print(class_help(self, self._name))
        elif subargs.name in command_list(self):
            docstring = getattr(self, subargs.name).__doc__
            print(safely_wrapped(cleandoc(docstring)))
        else:
            alert(f'Unrecognized command: "{subargs.name}"')
            print(class_help(self, self._name))


# Utility functions.
# .............................................................................

def command_list(cls):
    return [name for name in dir(cls) if not name.startswith('_')]


def available_commands(cls, conjunction = 'or'):
    '''Return a string with a comma-separated list of commands on this class.

    A conjunction is added before the final command. By default, "or" is used,
    leading to a string of the form "foo, bar, or baz". The optional argument
    'conjunction' can be used to change this. Setting the value to an empty
    string will result in no conjunction being added.
    '''
    commands = command_list(cls)
    if len(commands) > 1:
        text_list = commands[0:-1] + [conjunction + ' ' + commands[-1]]
    else:
        text_list = [commands[0]]
    return ', '.join(f'{item.strip()}' for item in text_list)


def docstring_summary(cls, cmd_name = ''):
    text = safely_wrapped(cleandoc(cls.__class__.__doc__))
    text += '\n\nThe following commands are available:\n\n'

    # The longest name determines the indentation of the 2nd column.
    commands = command_list(cls)
    indent = max(len(name) for name in commands) + 2
    for name in commands:
        docstring = getattr(cls, name).__doc__
        if not docstring:
            continue
        first_line = docstring.split('\n')[0].rstrip('.')
        text += f'  {name}{" "*(indent - len(name))}{first_line}\n'
    return text


def method_help(method):
    return safely_wrapped(cleandoc(method.__doc__))


def class_help(cls, cmd_name = ""):
    text = docstring_summary(cls)
    for name in command_list(cls):
        if cmd_name:
            text += '\n' + cmd_name + ' ' + name + '\n'
            text += '~'*(len(cmd_name) + len(name) + 1) + '\n\n'
        else:
            text += '\n' + name + '\n'
            text += '~'*len(name) + '\n\n'
        text += safely_wrapped(cleandoc(getattr(cls, name).__doc__)) + '\n'
    return text


def wrapped(string, width = get_terminal_size().columns - 4):
    return '\n'.join(wrap(string, width))


def safely_wrapped(content):
    '''Wrap the given content, being careful not to touch indented lines.'''
    # Replace leading blanks w/ special char so we can find them after wrapping.
    indents_saved = re.sub(r'^  +', '⁌', content, flags = re.MULTILINE)
    paras = indents_saved.replace('\n\n', '⁍').split('⁍')
    paras = map(lambda s: s if s.startswith('⁌') else wrapped(s), paras)
    paras = map(lambda s: re.sub('⁌', '  ', s), paras)
    return '\n\n'.join(paras)


def method_parser(method_function, summary, **kwargs):
    return ArgumentParser(description = method_help(method_function),
                          usage = '%(prog)s ' + summary,
                          formatter_class = RawDescriptionHelpFormatter,
                          add_help = False, **kwargs)


def command_parser(cls, name, summary):
    '''Return a parser for a leaf command, described by the class docstring.'''
    return ArgumentParser(description = safely_wrapped(cleandoc(cls.__doc__)),
                          usage = f'%(prog)s {name} {summary}',
                          formatter_class = RawDescriptionHelpFormatter)


# Argument types.
# .............................................................................
# These are used as the "type" of argparse arguments.  Raising
# ArgumentTypeError makes argparse print the usage and exit with code 2.

def _checked(validator, text, **kwargs):
    try:
        return validator(text.strip(), **kwargs)
    except (ValueError, TypeError) as ex:
        raise ArgumentTypeError(f'invalid value "{text}": {ex}')


def positive_int(text):
    return _checked(validators.integer, text, minimum = 1)


def nonnegative_float(text):
    return _checked(validators.float, text, minimum = 0)


def positive_float(text):
    value = _checked(validators.float, text, minimum = 0)
    if value == 0:
        raise ArgumentTypeError(f'invalid value "{text}": must be positive')
    return value


def ratio(text):
    '''A noise ratio: a float in [0, 1).'''
    value = _checked(validators.float, text, minimum = 0, maximum = 1)
    if value >= 1:
        raise ArgumentTypeError(f'invalid value "{text}": must be less than 1')
    return value


def int_list(text):
    '''A comma-separated list of positive integers, e.g., "30,30,30,30".'''
    return [positive_int(item) for item in _split(text)]


def float_list(text):
    '''A comma-separated list of nonnegative floats.'''
    return [nonnegative_float(item) for item in _split(text)]


def ratio_list(text):
    return [ratio(item) for item in _split(text)]


def float_range(text):
    '''An inclusive range "start:step:stop", e.g., "0.7:0.1:1.5".'''
    parts = text.split(':')
    if len(parts) != 3:
        raise ArgumentTypeError(f'invalid range "{text}": expected start:step:stop')
    start, step, stop = (positive_float(part) for part in parts)
    if stop < start:
        raise ArgumentTypeError(f'invalid range "{text}": stop is below start')
    # Steps are counted, not accumulated, so 0.7:0.1:1.5 ends at 1.5 exactly.
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def _split(text):
    items = [item for item in text.split(',') if item.strip()]
    if not items:
        raise ArgumentTypeError(f'invalid list "{text}": no values')
    return items


def nonnegative_int(text):
    return _checked(validators.integer, text, minimum = 0)


def value_range(text):
    '''Two comma-separated numbers "low,high" with low < high.'''
    items = _split(text)
    if len(items) != 2:
        raise ArgumentTypeError(f'invalid range "{text}": expected low,high')
    low, high = (_checked(validators.float, item) for item in items)
    if not low < high:
        raise ArgumentTypeError(f'invalid range "{text}": low must be below high')
    return (low, high)


def solver_name(text):
    if text.strip() not in _SOLVERS:
        raise ArgumentTypeError(f'unknown solver "{text}"; expected one of'
                                f' {", ".join(_SOLVERS)}')
    return text.strip()


def solver_list(text):
    return [solver_name(item) for item in _split(text)]


# Shared option groups.
# .............................................................................

def add_solver_options(parser):
    '''Add the options that override the [solver] configuration settings.'''
    group = parser.add_argument_group('solver options')
    group.add_argument('--tau', type = positive_float, metavar = 'T',
                       help = 'weight of the l1 term (default: 1/sqrt of the'
                       ' larger unfolding side, averaged)')
    group.add_argument('--tau-scale', type = positive_float, metavar = 'F',
                       help = 'multiplier of the default tau (default 1)')
    group.add_argument('--alpha', type = float_list, metavar = 'A,...',
                       help = 'K-1 nonnegative weights of the TT unfoldings')
    group.add_argument('--tol', type = positive_float, metavar = 'E',
                       help = 'tolerance on relative changes and residuals')
    group.add_argument('--max-iters', type = positive_int, metavar = 'N',
                       help = 'iteration limit')
    group.add_argument('--mu0', type = positive_float, metavar = 'M',
                       help = 'initial penalty')
    group.add_argument('--mu-max', type = positive_float, metavar = 'M',
                       help = 'largest penalty')
    group.add_argument('--rho', type = positive_float, metavar = 'R',
                       help = 'penalty growth factor per iteration')
    group.add_argument('--seed', type = nonnegative_int, metavar = 'S',
                       help = 'random seed')
    return group


def solver_overrides(args):
    '''Return the solver options given in 'args', as SolverConfig fields.'''
    overrides = {'tau': args.tau, 'tol': args.tol, 'max_iters': args.max_iters,
                 'mu0': args.mu0, 'mu_max': args.mu_max, 'rho': args.rho,
                 'seed': args.seed, 'tau_scale': args.tau_scale}
    if args.alpha is not None:
        overrides['alpha'] = tuple(args.alpha)
    return {name: value for name, value in overrides.items() if value is not None}
