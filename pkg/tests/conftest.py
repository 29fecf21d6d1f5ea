import functools

from beyondgen.constraints import ClassSpec
from beyondgen.embedding import Drawing, GraphSpec
from beyondgen.generator import generate_all

ALL_CLASSES = ["1planar", "2planar", "3planar", "4planar", "5planar", "quasiplanar",
               "fanplanar", "fancrossingfree", "gapplanar"]

# lines collected by the acceptance suite, printed once at the end of the run
ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def generated(cls, graph, oriented=False):
    """Cached full generation; callers must not mutate the result."""
    return generate_all(GraphSpec.parse(graph), ClassSpec.parse(cls, oriented=oriented))


def relabel(d, perm, mirror=False):
    """Copy of ``d`` with vertex ids renamed by ``perm`` (optionally mirrored)."""
    n = d.n_vertices
    inv = [0] * n
    for v, w in enumerate(perm):
        inv[w] = v
    rings = d.rotations()
    labels = [d.labels[inv[w]] for w in range(n)]
    cross = [d.cross_of[inv[w]] for w in range(n)]
    rots = []
    for w in range(n):
        ring = [perm[u] for u in rings[inv[w]]]
        rots.append(ring[::-1] if mirror else ring)
    chains = [[perm[u] for u in ch] for ch in d.chains]
    return Drawing.from_rotations(labels, cross, chains, rots, graph=d.graph)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
