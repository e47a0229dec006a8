import os
import socket
import urllib.request
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

import rtrx

settings.register_profile("pkg", deadline=None, max_examples=60)
settings.load_profile("pkg")

SNAP_URLS = {
    "email-Eu-core": "https://snap.stanford.edu/data/email-Eu-core.txt.gz",
    "ca-AstroPh": "https://snap.stanford.edu/data/ca-AstroPh.txt.gz",
}


def _data_dir() -> Path:
    env = os.environ.get("RTRX_DATA")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "rtrx"


def dataset_path(name: str) -> Path:
    """Return the local path of a SNAP dataset, downloading on first use.

    Skips the calling test when the file is absent and the download fails
    (offline sandbox); drop the .txt.gz under $RTRX_DATA to run these."""
    path = _data_dir() / f"{name}.txt.gz"
    if path.exists():
        return path
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".part")
    old = socket.getdefaulttimeout()
    socket.setdefaulttimeout(30)
    try:
        urllib.request.urlretrieve(SNAP_URLS[name], tmp)
        tmp.rename(path)
        return path
    except Exception as exc:
        tmp.unlink(missing_ok=True)
        pytest.skip(f"dataset {name} unavailable ({exc.__class__.__name__}: {exc}); "
                    f"place {name}.txt.gz at {path} to enable this test")
    finally:
        socket.setdefaulttimeout(old)


@pytest.fixture(scope="session")
def eu_graph():
    return rtrx.load_edge_list(dataset_path("email-Eu-core"))


@pytest.fixture(scope="session")
def astro_graph():
    return rtrx.load_edge_list(dataset_path("ca-AstroPh"))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile (or load from cache) every jit kernel on a toy instance so
    # per-test timings measure the algorithm, not numba
    g = rtrx.from_edges([(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (2, 4), (4, 5)])
    counts = rtrx.count_edge_triangle_array(g)
    fam = rtrx.run(g, rtrx.ExtractionParams(), counts=counts, verify="full")
    rtrx.grow(g, fam, 1)
    rtrx.run(g, rtrx.ExtractionParams(two_hop_mode="beta_threshold", beta=0.25))
    rtrx.count_edge_triangle_array(g, threads=2)


# ---- small graph builders ----------------------------------------------

def clique_edges(k, offset=0):
    return [(i + offset, j + offset) for i in range(k) for j in range(i + 1, k)]


def path_edges(k, offset=0):
    return [(i + offset, i + 1 + offset) for i in range(k - 1)]


def cycle_edges(k, offset=0):
    return path_edges(k, offset) + [(offset + k - 1, offset)]


def star_edges(leaves, center=0):
    return [(center, center + i) for i in range(1, leaves + 1)]


def complete_multipartite_edges(*part_sizes):
    bounds = np.cumsum((0,) + part_sizes)
    edges = []
    for pi in range(len(part_sizes)):
        for pj in range(pi + 1, len(part_sizes)):
            for u in range(bounds[pi], bounds[pi + 1]):
                for v in range(bounds[pj], bounds[pj + 1]):
                    edges.append((u, v))
    return edges


def gnp_edges(n, p, seed):
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, 1)
    mask = rng.random(iu.shape[0]) < p
    return list(zip(iu[mask].tolist(), iv[mask].tolist()))


def build(edges, n=None):
    return rtrx.from_edges(edges, num_vertices=n)
