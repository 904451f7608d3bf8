"""Shared deterministic graph streams for the test suite."""

from mtindex.models import SeedDerivation, bipartite, erdos_renyi, generate, random_geometric


def mixed_graphs(master_seed, count, sizes=(4, 6, 8, 12, 16, 20), params=(0.15, 0.4, 0.8)):
    """Yield ``count`` small graphs cycling through models, sizes and densities."""
    makers = [
        lambda n, p: erdos_renyi(n, p),
        lambda n, p: random_geometric(n, p),
        lambda n, p: bipartite(n // 2, n - n // 2, p),
    ]
    produced = 0
    replica = 0
    while produced < count:
        for mi, make in enumerate(makers):
            for si, n in enumerate(sizes):
                for pi, p in enumerate(params):
                    if produced >= count:
                        return
                    spec = make(n, p)
                    point_id = (mi * len(sizes) + si) * len(params) + pi
                    yield generate(spec, SeedDerivation(master_seed, point_id, replica))
                    produced += 1
        replica += 1


def model_graphs(master_seed, model, count, sizes=(6, 10, 14, 18, 20), params=(0.1, 0.3, 0.6, 0.9)):
    """Yield ``count`` graphs of one model across sizes and densities."""
    make = {
        "er": lambda n, p: erdos_renyi(n, p),
        "rg": lambda n, p: random_geometric(n, p),
        "br": lambda n, p: bipartite(n // 2, n - n // 2, p),
    }[model]
    produced = 0
    replica = 0
    while True:
        for si, n in enumerate(sizes):
            for pi, p in enumerate(params):
                if produced >= count:
                    return
                spec = make(n, p)
                yield generate(spec, SeedDerivation(master_seed, si * len(params) + pi, replica))
                produced += 1
        replica += 1
