'''
config.py: handle fttrpca configuration and the "config" command

Settings are layered: the built-in defaults below, then the user's settings
file (if any), then a file given with --configfile, and finally values given
on the command line.

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

from   appdirs import user_config_dir
from   commonpy.file_utils import writable
from   configparser import ConfigParser
from   os import makedirs
from   os.path import exists, join, dirname, isdir

from   fttrpca.command import Command, method_parser
from   fttrpca.exceptions import CannotProceed, FileError
from   fttrpca.exit_codes import ExitCode
from   fttrpca.log import log, loglist
from   fttrpca.solver import SolverConfig
from   fttrpca.ui import inform, warn, alert


# Constants.
# .............................................................................

# Default configuration values, in the absence of anything else.  The solver
# values are the penalty schedule and stopping rule of the ADMM iterations.
DEFAULT_SETTINGS = {
    'fttrpca': {
        'quiet'       : False,
        'debug'       : False,
        'outputdir'   : '.',
    },
    'solver': {
        'mu0'         : '1e-2',
        'mu_max'      : '1e10',
        'rho'         : '1.1',
        'tol'         : '1e-8',
        'max_iters'   : '500',
        'seed'        : '0',
        'rank_scale'  : '1.2',
        'tau_scale'   : '1.0',
    },
}

# Types of the solver settings, used to convert the stored strings.
_SOLVER_TYPES = {
    'mu0'        : float,
    'mu_max'     : float,
    'rho'        : float,
    'tol'        : float,
    'max_iters'  : int,
    'seed'       : int,
    'rank_scale' : float,
    'tau_scale'  : float,
}

# The configuration directory for this user account on the current computer.
# This varies by operating system.  Known values are:
#   macOS:  ~/Library/Application Support/fttrpca/
#   Linux:  ~/.config/fttrpca/
CONFIG_DIR = user_config_dir('fttrpca', 'fttrpca')

# The settings file is in the format understood by Python's ConfigParser.
SETTINGS_FILE = 'fttrpca.ini'


# Class definitions.
# .............................................................................

class ConfigStorage():
    '''Configuration storage class.'''

    _config = ConfigParser(allow_no_value = True)
    _config_file = join(CONFIG_DIR, SETTINGS_FILE)

    def __init__(self):
        # Always begin with the built-in defaults.  Anything loaded or set
        # afterwards overrides them.
        self._config.read_dict(DEFAULT_SETTINGS)


    @staticmethod
    def load(file = None):
        '''Loads a configuration from a file.

        The user's settings file in CONFIG_DIR is read first, if it exists;
        then, if 'file' is given, its values override those.
        '''
        if exists(ConfigStorage._config_file):
            log('loading configuration from file ' + ConfigStorage._config_file)
            ConfigStorage._config.read(ConfigStorage._config_file)
        if file and exists(file):
            log('loading configuration from file ' + file)
            ConfigStorage._config.read(file)


    @staticmethod
    def reset():
        '''Discard all loaded and set values, returning to the defaults.'''
        ConfigStorage._config = ConfigParser(allow_no_value = True)
        ConfigStorage._config.read_dict(DEFAULT_SETTINGS)


    @staticmethod
    def persist(name, section = 'fttrpca', file = None):
        '''Write the current value of 'name' to the user's settings file.

        Only that one variable is added or replaced.  The other contents of
        the file are kept, and values that came from the defaults, from
        --configfile or from the command line are not written.
        '''
        file_path = file or ConfigStorage._config_file
        stored = ConfigParser(allow_no_value = True)
        if exists(file_path):
            stored.read(file_path)
        if not stored.has_section(section):
            stored.add_section(section)
        stored[section][name] = ConfigStorage._config[section][name]
        if not exists(dirname(file_path)):
            log('creating config dir ' + dirname(file_path))
            makedirs(dirname(file_path), exist_ok = True)
        with open(file_path, 'w') as output_file:
            log(f'writing {section}.{name} to config file {file_path}')
            stored.write(output_file)


    @staticmethod
    def get(name, section = 'fttrpca'):
        '''Returns the value of configuration variable 'name'.'''
        return ConfigStorage._config.get(section, name)


    @staticmethod
    def set(name, value, section = 'fttrpca'):
        '''Sets the value of configuration variable 'name' to 'value'.

        If 'value' is None, nothing is done.  The new value is kept in memory
        only; call persist() to write it to the settings file.
        '''
        if name not in ConfigStorage._config[section]:
            raise KeyError(f'Unknown config variable name: {section}.{name}')
        if value is None:
            log(f'no new value given for {section}.{name} -- leaving as-is')
            return
        value = str(value)
        if ConfigStorage._config[section][name] != value:
            log(f'setting {section}.{name} to {value}')
            ConfigStorage._config[section][name] = value


    @staticmethod
    def solver_defaults():
        '''Return the [solver] settings as a dict of typed values.'''
        section = ConfigStorage._config['solver']
        return {name: kind(section[name]) for name, kind in _SOLVER_TYPES.items()}


    @staticmethod
    def solver_config(**overrides):
        '''Return a SolverConfig from the [solver] settings and 'overrides'.'''
        values = ConfigStorage.solver_defaults()
        del values['rank_scale']
        values.update(overrides)
        return SolverConfig(**values)


    @staticmethod
    def settings():
        '''Return a list of (name, value) pairs for the current config.'''
        entries = []
        for section_name in ConfigStorage._config.sections():
            for var, value in ConfigStorage._config[section_name].items():
                entries.append((f'{section_name}.{var}', value))
        return entries


    @staticmethod
    def log_settings():
        '''Log all the current settings to the log stream.'''
        log('configuration:')
        loglist(f'  {var} = {value}' for var, value in Config.settings())


class ConfigCommand(Command):
    '''Set or show fttrpca's configuration.

    fttrpca has a number of configuration parameters that control its
    behavior.  Changed values are persisted in a settings file located in
    one of these directories (depending on the OS):

         ~/Library/Application Support/fttrpca/ (macOS) or
         ~/.config/fttrpca/ (Linux)

    The values can be inspected and set using the "config" command.
    '''

    def __init__(self, arg_list):
        super().__init__('config')
        super()._invoke_with(arg_list)


    def show(self, args):
        '''Print the current configuration and exit.'''
        if args:
            settings = dict(Config.settings())
            for name in args:
                if name in settings:
                    print(f'{name} = {settings[name]}')
                else:
                    warn(f'Unrecognized setting name: {name}')
        else:
            for var, value in Config.settings():
                print(f'{var} = "{value}"')


    def solver(self, args):
        '''Set a default value used by the solvers.

        The solvers use an increasing penalty schedule and stop once the
        relative changes and the constraint residuals are small.  Their
        parameters can be given on the command line of each command, or
        given persistent defaults with this command.  The recognized names
        are:

          mu0         initial penalty (default 1e-2)
          mu_max      largest penalty (default 1e10)
          rho         penalty growth factor per iteration (default 1.1)
          tol         tolerance of the stopping rule (default 1e-8)
          max_iters   iteration limit (default 500)
          seed        random seed for initialization (default 0)
          rank_scale  scale q of the given Tucker rank (default 1.2)
          tau_scale   multiplier of the default tau (default 1.0)

        For example,

            fttrpca config solver max_iters 1000
        '''
        parser = method_parser(self.solver, summary = 'config solver <name> <value>')
        parser.add_argument('name', nargs = '?', action = 'store')
        parser.add_argument('value', nargs = '?', action = 'store')
        if not args or 'help' in args:
            parser.print_help()
            return
        subargs = parser.parse_args(args)
        if subargs.name not in _SOLVER_TYPES:
            alert(f'Unrecognized solver setting: {subargs.name}')
            raise CannotProceed(ExitCode.bad_arg)
        if subargs.value is None:
            alert(f'Missing value after setting name {subargs.name}.')
            raise CannotProceed(ExitCode.bad_arg)
        try:
            value = _SOLVER_TYPES[subargs.name](subargs.value)
        except ValueError:
            alert(f'Not a valid value for {subargs.name}: {subargs.value}')
            raise CannotProceed(ExitCode.bad_arg)
        if value <= 0 and subargs.name != 'seed':
            alert(f'Value of {subargs.name} must be positive: {subargs.value}')
            raise CannotProceed(ExitCode.bad_arg)
        ConfigStorage.set(subargs.name, value, 'solver')
        ConfigStorage.persist(subargs.name, 'solver')
        inform(f'Set solver.{subargs.name} to {value}.')


    def outputdir(self, args):
        '''Set the default directory where tensor files will be written.

        The "synth" and "solve" commands write tensors in the TNSR1 format to
        the directory given by their --out option, or, in the absence of that
        option, to the directory set with this command.  For example,

            fttrpca config outputdir /tmp

        will change the output directory to /tmp.
        '''
        parser = method_parser(self.outputdir, summary = 'config outputdir <path>')
        parser.add_argument('path', action = 'store')
        if not args or 'help' in args:
            parser.print_help()
            return
        subargs = parser.parse_args(args)
        if not exists(subargs.path):
            alert(f'Directory does not exist: {subargs.path}')
            raise CannotProceed(ExitCode.file_error)
        elif not writable(subargs.path):
            alert(f'Directory is not writable: {subargs.path}')
            raise CannotProceed(ExitCode.file_error)
        ConfigStorage.set('outputdir', subargs.path)
        ConfigStorage.persist('outputdir')


# Exported symbols.
# .............................................................................

Config = ConfigStorage()


# Miscellaneous utilities.
# .............................................................................

def output_directory(path = None):
    '''Return 'path', or the configured output directory, after checking it.'''
    path = path or Config.get('outputdir')
    if not isdir(path):
        raise FileError(f'Output directory does not exist: {path}')
    if not writable(path):
        raise FileError(f'Output directory is not writable: {path}')
    return path
