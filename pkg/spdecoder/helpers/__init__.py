from pathlib import Path

from dynaconf import Dynaconf


CONF_DIR = Path(__file__).resolve().parents[2] / 'conf'

"""
The dynaconf object used to read the simulator defaults.

Environment variables are not loaded: the command line is the only way to
change a run, so that a manifest always replays the same experiment.
"""
settings = Dynaconf(
    core_loaders=["YAML"],
    loaders=[],
    preload=[f"{CONF_DIR}/*.yaml"],
    envless_mode=True,
    lowercase_read=True,
)
