import json
import logging
from dataclasses import dataclass, fields, replace
from os.path import exists, join
from typing import Optional
from appdirs import user_config_dir


@dataclass(frozen=True)
class Settings:
    bound: int = 6
    kind: str = "hhp"
    mode: str = "ipomset"
    max_dim: int = 6
    congruence_cap: int = 100000

    FILENAME = "config.json"

    @staticmethod
    def default_file() -> str:
        return join(user_config_dir("hdakit"), Settings.FILENAME)

    @staticmethod
    def load(filename: Optional[str] = None):
        settings = Settings()
        filename = Settings.default_file() if filename is None else filename
        if not exists(filename):
            return settings
        try:
            with open(filename, "r") as file:
                data = json.load(file)
        except Exception as e:
            logging.warning("ignoring config file " + filename + " (" + str(e) + ")")
            return settings
        if not isinstance(data, dict):
            logging.warning("ignoring config file " + filename + " (expected a JSON object)")
            return settings

        known = {field.name: field.type for field in fields(Settings)}
        values = {}
        for key, value in data.items():
            if key not in known:
                logging.warning("unknown config key " + key + " in " + filename)
            elif isinstance(value, bool) or not isinstance(value, int if known[key] in (int, "int") else str):
                logging.warning("config key " + key + " has wrong type in " + filename)
            else:
                values[key] = value
        logging.debug("loaded settings from " + filename + ": " + str(values))
        return replace(settings, **values)

    def save(self, filename: str):
        with open(filename, "w") as file:
            json.dump({field.name: getattr(self, field.name) for field in fields(Settings)}, file, indent=2)
