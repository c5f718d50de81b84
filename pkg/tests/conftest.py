import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from localpop.generate import GeneratorConfig
from localpop.graph_core import LabeledDigraph, build_graph
from localpop.hierarchy import SUBCATEGORIES, GroupLabel

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_graph(rng: np.random.Generator, n: int, m: int, k: int) -> LabeledDigraph:
    """Simple digraph on ``n`` vertices spread over ``k`` random subcategories,
    with at most ``m`` edges (self-loops and repeats of the drawn pairs
    removed). Original ids are sparse to exercise the remapping."""
    subs = rng.choice(SUBCATEGORIES, size=k, replace=False)
    tier2 = rng.choice(subs, size=n).astype(np.int16)
    ids = np.sort(rng.choice(10 * n + 10, size=n, replace=False)).astype(np.int64) + 1000
    src = rng.integers(0, n, size=m)
    dst = rng.integers(0, n, size=m)
    keep = src != dst
    keys = np.unique(src[keep] * n + dst[keep])
    return LabeledDigraph.from_arrays(keys // n, keys % n, ids, tier2 // 10, tier2)


def random_config(rng: np.random.Generator, tier: int = 1, window: float | None = None,
                  arrival: str = "interleaved") -> GeneratorConfig:
    """A config filling at most a fifth of each cell's rough capacity."""
    k = int(rng.integers(2, 7))
    if tier == 1:
        groups = [GroupLabel(int(c), int(c) * 10 + 1) for c in rng.choice(np.arange(1, 7), k, replace=False)]
    else:
        groups = [GroupLabel.from_subcategory(int(s)) for s in rng.choice(SUBCATEGORIES, k, replace=False)]
    sizes = rng.integers(5, 200, k)
    cap = np.outer(sizes, sizes) / 2.0
    cap[np.diag_indices(k)] = sizes * (sizes - 1) / 2.0
    if window is not None:
        cap *= min(1.0, 2 * window)
    matrix = np.floor(rng.uniform(0, 0.2, (k, k)) * cap).astype(np.int64)
    return GeneratorConfig(tuple(groups), tuple(int(s) for s in sizes), matrix, tier,
                           float(rng.uniform(0.1, 3.0)), int(rng.integers(2**31)), arrival, window)


FIXTURE6_EDGES = [(2, 1), (3, 1), (3, 2), (4, 1), (5, 4), (6, 4), (6, 5), (5, 3), (1, 6)]
FIXTURE6_LABELS = {1: (1, 11), 2: (1, 11), 3: (1, 12), 4: (2, 21), 5: (2, 22), 6: (2, 22)}


@pytest.fixture
def fixture6() -> LabeledDigraph:
    """Six patents in two categories, nine citations."""
    return build_graph(FIXTURE6_EDGES, {p: GroupLabel(*lab) for p, lab in FIXTURE6_LABELS.items()})
