import os
from configparser import ConfigParser, NoOptionError, NoSectionError

DEFAULT_CONFIG_FILE = os.path.expanduser("~/.config/ecbench/ecbench.cfg")

DEFAULTS = {
    "general": {"curve": "curves/p521.curve", "algorithm": "l2r-naf", "workers": "4"},
    "LOGGING": {"file_log_level": "ERROR", "log_file": "~/.config/ecbench/ecbench.log"},
    "bench": {"trials": "100", "seed": "1", "out": "bench.csv"},
    "verify": {"exhaustive_bits": "10", "random_trials": "100"},
}

SEED_ENV = "ECC_SEED"


class ConfigHandler(ConfigParser):
    def __init__(self, file_path, logger):
        self.file_path = file_path
        self.logger = logger
        super().__init__(allow_no_value=True)
        self.initialize_config_file()
        self.reload_config()

    @property
    def file(self):
        return self.file_path

    def reload_config(self):
        self.read(self.file_path)

    def write_changes(self):
        with open(self.file_path, "w") as configfile:
            self.write(configfile)

    def safe_get(self, section, key, default=None):
        try:
            return self.get(section, key)
        except KeyError:
            return default
        except NoSectionError:
            return default
        except NoOptionError:
            return default

    def setting(self, section, key):
        """Config value with the built-in default behind it."""
        return self.safe_get(section, key, DEFAULTS.get(section, {}).get(key))

    def int_setting(self, section, key):
        value = self.setting(section, key)
        try:
            return int(value)
        except (TypeError, ValueError):
            self.logger.warning(f"Ignoring non-integer {section}.{key} = {value!r}")
            return int(DEFAULTS[section][key])

    def resolve_seed(self, cli_seed=None):
        if cli_seed is not None:
            return cli_seed
        env = os.environ.get(SEED_ENV)
        if env:
            try:
                return int(env, 0)
            except ValueError:
                self.logger.warning(f"Ignoring malformed {SEED_ENV}={env!r}")
        return self.int_setting("bench", "seed")

    def initialize_config_file(self):
        if not os.path.exists(self.file_path):
            self.logger.info("Creating config file")
            directory = os.path.dirname(self.file_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            for section, values in DEFAULTS.items():
                self.add_section(section)
                if section == "general":
                    self.set(section, "; curve file used when --curve is omitted")
                for key, value in values.items():
                    self.set(section, key, value)

            with open(self.file_path, "w") as configfile:
                self.write(configfile)
