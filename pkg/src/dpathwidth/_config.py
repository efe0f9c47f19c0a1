"""Default caps, overridable through environment variables."""
import os


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def exact_vertex_cap():
    """Largest vertex count accepted by the exact treewidth/pathwidth solvers."""
    return _env_int("DPW_EXACT_CAP", 14)


def cover_edge_cap():
    """Largest edge count accepted by the exact d-cover search."""
    return _env_int("DPW_COVER_EDGE_CAP", 12)


def enum_var_cap():
    """Largest variable count accepted by brute-force assignment enumeration."""
    return _env_int("DPW_ENUM_CAP", 24)


def path_cap():
    """Largest number of source-sink paths enumerated in a branching program."""
    return _env_int("DPW_PATH_CAP", 100_000)


def resolve(cap, default_fn):
    return default_fn() if cap is None else cap
