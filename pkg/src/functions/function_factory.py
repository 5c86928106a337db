from typing import Dict

from .test_functions import TestFunction


def parse_parameters(text: str) -> Dict[str, str]:
    """``"r=1,eta=0.5"`` -> ``{"r": "1", "eta": "0.5"}``."""
    params: Dict[str, str] = {}
    if not text.strip():
        return params
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key.strip() or not value.strip():
            raise ValueError(f"Malformed parameter {item!r}, expected key=value")
        key = key.strip()
        if key in params:
            raise ValueError(f"Duplicate parameter {key!r}")
        params[key] = value.strip()
    return params


def _take(params: Dict[str, str], kind: str, *names: str):
    unknown = sorted(set(params) - set(names))
    missing = [n for n in names if n not in params]
    if unknown or missing:
        raise ValueError(f"{kind} takes parameters {', '.join(names)} (missing: {missing}, unknown: {unknown})")
    return [params[n] for n in names]


def get_test_function(spec: str) -> TestFunction:
    """Build a TestFunction from ``"kind:key=value,..."``."""
    kind, _, rest = spec.strip().partition(":")
    params = parse_parameters(rest)

    if kind == "power":
        (r,) = _take(params, kind, "r")
        return TestFunction.power(float(r))

    elif kind == "power_cutoff":
        r, eta = _take(params, kind, "r", "eta")
        return TestFunction.power_cutoff(float(r), float(eta))

    elif kind == "bounded_c2":
        (name,) = _take(params, kind, "name")
        return TestFunction.bounded_c2(name)

    elif kind == "square_indicator":
        (u,) = _take(params, kind, "u")
        return TestFunction.square_indicator(float(u))

    else:
        raise ValueError(f"Unknown test function kind: {kind}")
