"""Experiment configuration: an INI-style file with fixed sections.

Grammar (EBNF)::

    file     = { blank | comment | section } ;
    section  = "[" name "]" NL { entry } ;
    entry    = key ( "=" | ":" ) value NL ;
    comment  = ( "#" | ";" ) text NL ;

Sections and keys (defaults in brackets)::

    [scenario]   distribution [uniform(0, 1)], class [threshold], target,
                 omega, prior (optional cross-check)
    [algorithm]  name (known_pi | unknown_pi | estrate | cal | passive_pu),
                 eps, delta, cal_prior_prune [false]
    [constants]  mode [practical], M1, M2, M3 [1 in practical mode],
                 k_scale, sample_scale, lambda_scale [1], theta (override)
    [run]        trials [1], base_seed [0], jobs [0 = all cores], audit [true],
                 record_wall_time [false]
    [caps]       unlabeled_draws [1e7], label_requests [1e6], wall_seconds [60]
    [output]     csv, json (optional paths)

Unknown sections or keys are errors; every problem is reported at once.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..errors import ConfigError, ParseError, ValidationError
from ..hypothesis import parse_class, parse_hypothesis
from ..runtime import Caps, Constants
from ..scenario import Gaussian1D, Mixture, Scenario, Uniform, UniformBox

ALGORITHMS = ("known_pi", "unknown_pi", "estrate", "cal", "passive_pu")

SCHEMA = {
    "scenario": {"distribution", "class", "target", "omega", "prior"},
    "algorithm": {"name", "eps", "delta", "cal_prior_prune"},
    "constants": {"mode", "m1", "m2", "m3", "k_scale", "sample_scale", "lambda_scale", "theta"},
    "run": {"trials", "base_seed", "jobs", "audit", "record_wall_time"},
    "caps": {"unlabeled_draws", "label_requests", "wall_seconds"},
    "output": {"csv", "json"},
}


@dataclass
class ExperimentConfig:
    distribution: str = "uniform(0, 1)"
    hclass: str = "threshold"
    target: str = "0.5"
    omega: float = 1.0
    prior: float | None = None
    algorithm: str = "known_pi"
    eps: float = 0.05
    delta: float = 0.1
    cal_prior_prune: bool = False
    constants: Constants = field(default_factory=Constants)
    theta_override: float | None = None
    trials: int = 1
    base_seed: int = 0
    jobs: int = 0
    audit: bool = True
    record_wall_time: bool = False
    caps: Caps = field(default_factory=Caps)
    csv_path: str | None = None
    json_path: str | None = None
    source_text: str = ""
    base_dir: str = "."

    def build_scenario(self):
        d = parse_distribution(self.distribution)
        c = parse_class(_resolve_file(self.hclass, self.base_dir))
        h = parse_hypothesis(c, self.target)
        return Scenario(d, c, h, self.omega, prior_hint=self.prior), c

    def as_dict(self) -> dict:
        out = asdict(self)
        out.pop("source_text")
        out.pop("base_dir")
        return out


def _resolve_file(spec: str, base_dir: str) -> str:
    m = re.search(r"file\s*=\s*([^,)]+)", spec)
    if not m:
        return spec
    path = Path(m.group(1).strip())
    if not path.is_absolute():
        path = Path(base_dir) / path
    return spec[: m.start(1)] + str(path) + spec[m.end(1):]


# --- distributions ----------------------------------------------------------

def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    if "".join(cur).strip():
        parts.append("".join(cur).strip())
    return parts


def parse_distribution(text: str):
    """``uniform(lo, hi)``, ``gaussian(mean, std)``, ``uniform_box(x0, x1, y0, y1)``
    or ``mixture(w1*comp1, w2*comp2, ...)``."""
    m = re.fullmatch(r"\s*([a-z_]+)\s*\((.*)\)\s*", text)
    if not m:
        raise ValueError(f"cannot parse distribution {text!r}")
    kind, body = m.group(1), m.group(2)
    if kind == "mixture":
        comps, weights = [], []
        for part in _split_top(body):
            w, _, comp = part.partition("*")
            if not comp:
                raise ValueError(f"mixture component {part!r} needs the form weight*dist")
            weights.append(float(w))
            comps.append(parse_distribution(comp))
        return Mixture(tuple(comps), tuple(weights))
    args = [float(a) for a in _split_top(body)]
    if kind == "uniform" and len(args) == 2:
        return Uniform(*args)
    if kind == "gaussian" and len(args) == 2:
        return Gaussian1D(*args)
    if kind == "uniform_box" and len(args) % 2 == 0 and args:
        return UniformBox(tuple(args[0::2]), tuple(args[1::2]))
    raise ValueError(f"cannot parse distribution {text!r}")


# --- loading ----------------------------------------------------------------

def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([ParseError(None, f"cannot read {path}: {exc.strerror}")]) from None
    return parse_config(text, base_dir=str(path.parent))


def parse_config(text: str, base_dir: str = ".") -> ExperimentConfig:
    cp = configparser.ConfigParser(
        inline_comment_prefixes=("#", ";"), interpolation=None, strict=True,
        default_section="__none__",
    )
    try:
        cp.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError([ParseError(exc.lineno, "entry before any [section] header")]) from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as exc:
        raise ConfigError([ParseError(exc.lineno, exc.message.split(":")[-1].strip())]) from None
    except configparser.ParsingError as exc:
        raise ConfigError([ParseError(ln, f"cannot parse {line.strip()!r}") for ln, line in exc.errors]) from None

    errors: list = []
    for sec in cp.sections():
        if sec not in SCHEMA:
            errors.append(ValidationError(sec, "unknown section"))
            continue
        for key in cp[sec]:
            if key not in SCHEMA[sec]:
                errors.append(ValidationError(f"{sec}.{key}", "unknown key"))

    def get(sec, key, default=None):
        if cp.has_section(sec) and key in cp[sec]:
            return cp[sec][key].strip()
        return default

    def num(sec, key, default, conv=float, name=None):
        raw = get(sec, key)
        if raw is None:
            return default
        try:
            return conv(float(raw)) if conv is int else conv(raw)
        except ValueError:
            errors.append(ValidationError(name or key, f"not a number: {raw!r}"))
            return default

    def flag(sec, key, default):
        raw = get(sec, key)
        if raw is None:
            return default
        low = raw.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        errors.append(ValidationError(key, f"not a boolean: {raw!r}"))
        return default

    cfg = ExperimentConfig(source_text=text, base_dir=base_dir)
    cfg.distribution = get("scenario", "distribution", cfg.distribution)
    cfg.hclass = get("scenario", "class", cfg.hclass)
    cfg.target = get("scenario", "target", cfg.target)
    cfg.omega = num("scenario", "omega", cfg.omega)
    cfg.prior = num("scenario", "prior", None)
    cfg.algorithm = get("algorithm", "name", cfg.algorithm)
    cfg.eps = num("algorithm", "eps", cfg.eps)
    cfg.delta = num("algorithm", "delta", cfg.delta)
    cfg.cal_prior_prune = flag("algorithm", "cal_prior_prune", False)

    mode = get("constants", "mode", "practical")
    ms = {k: num("constants", k.lower(), None, name=k) for k in ("M1", "M2", "M3")}
    scales = {k: num("constants", k, 1.0) for k in ("k_scale", "sample_scale", "lambda_scale")}
    cfg.theta_override = num("constants", "theta", None, name="theta")
    cfg.trials = num("run", "trials", 1, int)
    cfg.base_seed = num("run", "base_seed", 0, int)
    cfg.jobs = num("run", "jobs", 0, int)
    cfg.audit = flag("run", "audit", True)
    cfg.record_wall_time = flag("run", "record_wall_time", False)
    wall = get("caps", "wall_seconds")
    cfg.caps = Caps(
        unlabeled_draws=num("caps", "unlabeled_draws", Caps.unlabeled_draws, int),
        label_requests=num("caps", "label_requests", Caps.label_requests, int),
        wall_seconds=None if wall is not None and wall.lower() == "none"
        else num("caps", "wall_seconds", Caps.wall_seconds),
    )
    cfg.csv_path = get("output", "csv")
    cfg.json_path = get("output", "json")

    # --- validation -----------------------------------------------------------
    for name, val in (("eps", cfg.eps), ("delta", cfg.delta), ("omega", cfg.omega)):
        if not (isinstance(val, float) and 0.0 < val <= 1.0):
            errors.append(ValidationError(name, "must be in (0,1]"))
    if cfg.prior is not None and not 0.0 < cfg.prior <= 1.0:
        errors.append(ValidationError("prior", "must be in (0,1]"))
    if cfg.algorithm not in ALGORITHMS:
        errors.append(ValidationError("name", f"must be one of {', '.join(ALGORITHMS)}"))
    if cfg.trials < 0:
        errors.append(ValidationError("trials", "must be >= 0"))
    if cfg.jobs < 0:
        errors.append(ValidationError("jobs", "must be >= 0"))
    if cfg.caps.unlabeled_draws < 1 or cfg.caps.label_requests < 1:
        errors.append(ValidationError("caps", "draw and request caps must be >= 1"))
    if cfg.caps.wall_seconds is not None and not cfg.caps.wall_seconds > 0:
        errors.append(ValidationError("wall_seconds", "must be > 0 or none"))
    if cfg.theta_override is not None and not (math.isfinite(cfg.theta_override) and cfg.theta_override >= 1):
        errors.append(ValidationError("theta", "must be a finite value >= 1"))
    if mode not in ("practical", "theory"):
        errors.append(ValidationError("mode", "must be practical or theory"))
    elif mode == "theory":
        for k, v in ms.items():
            if v is None:
                errors.append(ValidationError(k, "theory mode needs an explicit value"))
    elif any(v is not None and v != 1.0 for v in ms.values()):
        errors.append(ValidationError("mode", "M1..M3 overrides need mode = theory"))
    for k, v in list(ms.items()) + list(scales.items()):
        if v is not None and not v > 0:
            errors.append(ValidationError(k, "must be > 0"))
    if not any(e.field in ("mode", "M1", "M2", "M3") or e.field in scales for e in errors):
        cfg.constants = Constants(mode=mode, **{k: (v if v is not None else 1.0) for k, v in ms.items()},
                                  **scales)
    if not errors:
        try:
            cfg.build_scenario()
        except (ValueError, OSError) as exc:
            errors.append(ValidationError("scenario", str(exc)))
    if errors:
        raise ConfigError(errors)
    return cfg
