"""JSON file formats for curves, run configuration, move sites and windows.

Curve files hold ``{"points": [[x, y], ...]}`` (a bare list of pairs is
also accepted). Coordinates may be numbers or decimal strings; strings are
read exactly.
"""

from dataclasses import asdict, dataclass, field, fields
import json

from .curve import PlanarCurve, ToleranceConfig
from .exceptions import MalformedCurve, ParseError


@dataclass(frozen=True)
class RunConfig:
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    seed: int = 0
    trials: int = 100
    amplitude: float = 0.01
    eps_scale: float = 1.0
    depth: int = 30

    def __post_init__(self):
        if not self.amplitude > 0 or not self.eps_scale > 0:
            raise ValueError("amplitude and eps_scale must be positive")
        if self.trials < 1 or self.depth < 1:
            raise ValueError("trials and depth must be >= 1")

    def with_seed(self, seed):
        if seed is None:
            return self
        return RunConfig(self.tolerances, int(seed), self.trials, self.amplitude,
                         self.eps_scale, self.depth)

    def to_json(self):
        out = asdict(self)
        out["tolerances"] = asdict(self.tolerances)
        return out


def load_json(path):
    """Parse a JSON file; OSError for unreadable files, ParseError for bad JSON."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def dumps(obj):
    """Deterministic JSON text."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def curve_from_json(data):
    if isinstance(data, dict):
        if "points" not in data:
            raise ParseError("curve JSON needs a 'points' array")
        data = data["points"]
    if not isinstance(data, list):
        raise ParseError("curve points must be a list of [x, y] pairs")
    for p in data:
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            raise ParseError(f"bad point {p!r}")
        for v in p:
            if isinstance(v, bool) or not isinstance(v, (int, float, str)):
                raise ParseError(f"bad coordinate {v!r}")
    return PlanarCurve(data)


def read_curve(path):
    try:
        return curve_from_json(load_json(path))
    except MalformedCurve as exc:
        raise ParseError(f"{path}: {exc}") from exc


def write_curve(curve, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(curve.to_json()))


def config_from_json(data):
    if not isinstance(data, dict):
        raise ParseError("config must be a JSON object")
    names = {f.name for f in fields(RunConfig)}
    unknown = set(data) - names
    if unknown:
        raise ParseError(f"unknown config keys: {sorted(unknown)}")
    kw = dict(data)
    tol = kw.pop("tolerances", {}) or {}
    tol_names = {f.name for f in fields(ToleranceConfig)}
    if set(tol) - tol_names:
        raise ParseError(f"unknown tolerance keys: {sorted(set(tol) - tol_names)}")
    try:
        return RunConfig(tolerances=ToleranceConfig(**tol), **kw)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad config: {exc}") from exc


def read_config(path):
    return config_from_json(load_json(path)) if path else RunConfig()


def site_from_json(data):
    from .moves import JSite, SSite

    if not isinstance(data, dict) or data.get("kind") not in ("J", "S"):
        raise ParseError("site JSON needs kind 'J' or 'S'")
    kw = {k: v for k, v in data.items() if k != "kind" and v is not None}
    cls = JSite if data["kind"] == "J" else SSite
    try:
        return cls(**kw)
    except TypeError as exc:
        raise ParseError(f"bad site: {exc}") from exc


def window_from_json(data):
    from .exactness import TruncationWindow

    try:
        return TruncationWindow(int(data["n"]), int(data["k"]), int(data["l"]), int(data.get("depth", 30)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad window: {exc}") from exc
