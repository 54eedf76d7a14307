"""Scenario files: one JSON document per link.

Units are carried by the key suffix: ``_w`` watts, ``_db`` decibels,
``_uW`` microwatts, ``_bpshz`` bits/s/Hz.  Missing sections take the
defaults below (delta = 10 dB, kappa = 8, p_t = 50 mW, p_r = 60 mW,
p_syn = 10 mW, eta = 0.35, p_min = 10 mW, p_max = 10 W, r_min = 0.01).
``p_max_w`` may be ``null`` for an unbounded transmit power.
"""
import json
import math
from dataclasses import dataclass, field, replace

from .allocator import Constraints, PowerModel, Scheme
from .sir import EffectiveChannel, ExplicitTopology

__all__ = ["Scenario", "ScenarioError", "load_scenario", "parse_scenario", "DEFAULT_SCENARIO"]


class ScenarioError(ValueError):
    """Invalid scenario document; ``where`` names the line or field."""

    def __init__(self, where, message):
        super().__init__(f"{where}: {message}")
        self.where = where


DEFAULT_SCENARIO = {
    "channel": {"kappa": 8, "delta_db": 10.0},
    "antennas": 8,
    "scheme": "sc",
    "power_model": {"eta": 0.35, "p_t_w": 0.05, "p_r_w": 0.06, "p_syn_w": 0.01},
    "constraints": {"epsilon": 1e-5, "r_min_bpshz": 0.01, "p_min_w": 0.01, "p_max_w": 10.0},
}

_TOP_KEYS = {"channel", "antennas", "scheme", "power_model", "constraints", "p0_w"}
_POWER_KEYS = {"eta", "p_t_w", "p_r_w", "p_syn_w"}
_CONSTRAINT_KEYS = {"epsilon", "r_min_bpshz", "p_min_w", "p_max_w"}
_EFFECTIVE_KEYS = {"kappa", "delta_db"}
_EXPLICIT_KEYS = {"signal_path_loss", "interferer_rx_powers_uW"}


@dataclass(frozen=True)
class Scenario:
    channel: object
    antennas: int
    scheme: Scheme
    power_model: PowerModel
    constraints: Constraints
    p0: float = None
    # delta in dB as written, kept so serialization round-trips exactly
    _delta_db: float = field(default=None, repr=False, compare=False)

    @property
    def effective_channel(self):
        if isinstance(self.channel, EffectiveChannel):
            return self.channel
        return self.channel.effective()

    @property
    def topology(self):
        return self.channel if isinstance(self.channel, ExplicitTopology) else None

    def with_updates(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        if isinstance(self.channel, ExplicitTopology):
            channel = {
                "signal_path_loss": self.channel.signal_path_loss,
                "interferer_rx_powers_uW": [p * 1e6 for p in self.channel.interferer_rx_powers],
            }
        else:
            delta_db = self._delta_db
            if delta_db is None:
                delta_db = 10.0 * math.log10(self.channel.delta)
            channel = {"kappa": self.channel.kappa, "delta_db": delta_db}
        c = self.constraints
        doc = {
            "channel": channel,
            "antennas": self.antennas,
            "scheme": self.scheme.value,
            "power_model": {
                "eta": self.power_model.eta,
                "p_t_w": self.power_model.p_t,
                "p_r_w": self.power_model.p_r,
                "p_syn_w": self.power_model.p_syn,
            },
            "constraints": {
                "epsilon": c.epsilon,
                "r_min_bpshz": c.r_min,
                "p_min_w": c.p_min,
                "p_max_w": None if math.isinf(c.p_max) else c.p_max,
            },
        }
        if self.p0 is not None:
            doc["p0_w"] = self.p0
        return doc

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2)


def _section(doc, key, allowed):
    value = doc.get(key, DEFAULT_SCENARIO.get(key))
    if not isinstance(value, dict):
        raise ScenarioError(key, "expected an object")
    unknown = set(value) - allowed
    if unknown:
        raise ScenarioError(f"{key}.{sorted(unknown)[0]}", "unknown field")
    return value


def _number(section, name, value, *, positive=False, allow_none=False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{section}.{name}", f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ScenarioError(f"{section}.{name}", "must be finite")
    if positive and value <= 0.0:
        raise ScenarioError(f"{section}.{name}", "must be positive")
    return value


def _integer(where, value, minimum=1):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ScenarioError(where, f"expected an integer >= {minimum}, got {value!r}")
    return value


def parse_scenario(doc):
    """Build a :class:`Scenario` from a decoded JSON object."""
    if not isinstance(doc, dict):
        raise ScenarioError("<root>", "expected a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ScenarioError(sorted(unknown)[0], "unknown field")

    ch = doc.get("channel", DEFAULT_SCENARIO["channel"])
    if not isinstance(ch, dict):
        raise ScenarioError("channel", "expected an object")
    keys = set(ch)
    delta_db = None
    if keys == _EFFECTIVE_KEYS:
        kappa = _integer("channel.kappa", ch["kappa"])
        delta_db = _number("channel", "delta_db", ch["delta_db"])
        channel = EffectiveChannel.from_db(kappa, delta_db)
    elif keys == _EXPLICIT_KEYS:
        loss = _number("channel", "signal_path_loss", ch["signal_path_loss"], positive=True)
        powers = ch["interferer_rx_powers_uW"]
        if not isinstance(powers, list) or not powers:
            raise ScenarioError("channel.interferer_rx_powers_uW", "expected a non-empty list")
        powers = [
            _number("channel", f"interferer_rx_powers_uW[{i}]", p, positive=True) * 1e-6
            for i, p in enumerate(powers)
        ]
        channel = ExplicitTopology(loss, tuple(powers))
    else:
        raise ScenarioError(
            "channel",
            "give exactly one of {kappa, delta_db} or {signal_path_loss, interferer_rx_powers_uW}",
        )

    antennas = _integer("antennas", doc.get("antennas", DEFAULT_SCENARIO["antennas"]))
    try:
        scheme = Scheme.parse(doc.get("scheme", DEFAULT_SCENARIO["scheme"]))
    except ValueError as exc:
        raise ScenarioError("scheme", str(exc)) from None

    pm = _section(doc, "power_model", _POWER_KEYS)
    pm_defaults = DEFAULT_SCENARIO["power_model"]
    try:
        power_model = PowerModel(
            eta=_number("power_model", "eta", pm.get("eta", pm_defaults["eta"])),
            p_t=_number("power_model", "p_t_w", pm.get("p_t_w", pm_defaults["p_t_w"])),
            p_r=_number("power_model", "p_r_w", pm.get("p_r_w", pm_defaults["p_r_w"])),
            p_syn=_number("power_model", "p_syn_w", pm.get("p_syn_w", pm_defaults["p_syn_w"])),
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError("power_model", str(exc)) from None

    cs = _section(doc, "constraints", _CONSTRAINT_KEYS)
    c_defaults = DEFAULT_SCENARIO["constraints"]
    p_max = cs.get("p_max_w", c_defaults["p_max_w"])
    p_max = _number("constraints", "p_max_w", p_max, allow_none=True)
    try:
        constraints = Constraints(
            epsilon=_number("constraints", "epsilon", cs.get("epsilon", c_defaults["epsilon"])),
            r_min=_number("constraints", "r_min_bpshz", cs.get("r_min_bpshz", c_defaults["r_min_bpshz"])),
            p_min=_number("constraints", "p_min_w", cs.get("p_min_w", c_defaults["p_min_w"])),
            p_max=math.inf if p_max is None else p_max,
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError("constraints", str(exc)) from None

    p0 = doc.get("p0_w")
    if p0 is not None:
        p0 = _number("<root>", "p0_w", p0, positive=True)
    return Scenario(channel, antennas, scheme, power_model, constraints, p0, delta_db)


def load_scenario(path):
    """Read and validate a scenario file."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    return parse_scenario(doc)
