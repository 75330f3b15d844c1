#!/usr/bin/env python

"""
syncrt/config.py

===============================================================================

    Copyright © 2020-2026 the syncrt authors.

    This file is part of syncrt, a compiler and schedule simulator for
    multi-periodic synchronous data-flow programs.

    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.

===============================================================================

**Optional YAML configuration.**

Example:

.. code-block:: yaml

    sensor_wcet: 0
    actuator_wcet: 0
    wcet_overrides:
      NL: 25
    policy: edf-dword
    horizon: null       # max r + 2H, in whole hyperperiods
    seed: 0

"""

import logging
from typing import Any, Dict

from attrdict import AttrDict
# noinspection PyPackageRequirements
import yaml  # from pyyaml

from syncrt.constants import (
    DEFAULT_ACTUATOR_WCET,
    DEFAULT_PERIOD_UNIT,
    DEFAULT_RANDOM_PROGRAMS,
    DEFAULT_SENSOR_WCET,
    DEFAULT_TICK_LIMIT,
    POLICIES,
    POLICY_EDF_DWORD,
)
from syncrt.exceptions import ImproperlyConfigured

log = logging.getLogger(__name__)

DEFAULTS = {
    "sensor_wcet": DEFAULT_SENSOR_WCET,
    "actuator_wcet": DEFAULT_ACTUATOR_WCET,
    "wcet_overrides": {},
    "tick_limit": DEFAULT_TICK_LIMIT,
    "policy": POLICY_EDF_DWORD,
    "horizon": None,
    "seed": 0,
    "random_programs": DEFAULT_RANDOM_PROGRAMS,
    "period_unit": DEFAULT_PERIOD_UNIT,
}  # type: Dict[str, Any]

_NONNEGATIVE_INTS = ["sensor_wcet", "actuator_wcet", "seed",
                     "random_programs"]
_POSITIVE_INTS = ["tick_limit", "period_unit"]


def default_config() -> AttrDict:
    return AttrDict(DEFAULTS)


def _check_int(config: AttrDict, key: str, minimum: int) -> None:
    value = config[key]
    if isinstance(value, bool) or not isinstance(value, int) or \
            value < minimum:
        raise ImproperlyConfigured(
            "Setting '{}' must be an integer >= {}, not {!r}".format(
                key, minimum, value))


def validate_config(config: AttrDict) -> None:
    """
    Raises:
        :exc:`syncrt.exceptions.ImproperlyConfigured`
    """
    unknown = sorted(set(config.keys()) - set(DEFAULTS.keys()))
    if unknown:
        raise ImproperlyConfigured("Unknown setting(s): {}".format(
            ", ".join(unknown)))
    for key in _NONNEGATIVE_INTS:
        _check_int(config, key, 0)
    for key in _POSITIVE_INTS:
        _check_int(config, key, 1)
    if config.horizon is not None:
        _check_int(config, "horizon", 1)
    if config.policy not in POLICIES:
        raise ImproperlyConfigured(
            "Setting 'policy' must be one of {}, not {!r}".format(
                POLICIES, config.policy))
    if not isinstance(config.wcet_overrides, dict):
        raise ImproperlyConfigured("Setting 'wcet_overrides' must be a map")
    for node, wcet in config.wcet_overrides.items():
        if isinstance(wcet, bool) or not isinstance(wcet, int) or wcet < 0:
            raise ImproperlyConfigured(
                "wcet override for {} must be a non-negative integer, "
                "not {!r}".format(node, wcet))


def load_config(config_filename: str = None,
                log_config: bool = False) -> AttrDict:
    """
    Loads a YAML config file over the defaults.

    Args:
        config_filename:
            Optional filename. If not supplied, the defaults are returned.
        log_config:
            Report the config to the Python log?

    Returns:
        an class:`AttrDict` containing the config

    Raises:
        :exc:`syncrt.exceptions.ImproperlyConfigured` for an invalid
        value; :exc:`OSError` if the file cannot be read
    """
    defaults = default_config()
    if not config_filename:
        return defaults
    log.info("Loading config from: {}".format(config_filename))
    with open(config_filename, "rb") as infile:
        try:
            loaded = yaml.safe_load(infile)
        except yaml.YAMLError as e:
            raise ImproperlyConfigured("Bad YAML: {}".format(e),
                                       filename=config_filename)
    if loaded is None:
        loaded = {}
    if not isinstance(loaded, dict):
        raise ImproperlyConfigured("Config file must contain a map",
                                   filename=config_filename)
    config = AttrDict(loaded)
    config = defaults + config  # use AttrDict to update
    validate_config(config)
    if log_config:
        log.debug("config: {}".format(repr(config)))
    return config
