import itertools

from hypothesis import strategies as st

from oddflower.graph import Graph


@st.composite
def graphs(draw, min_n=0, max_n=9, max_edges=None):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    if not pairs:
        return Graph(n)
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges))
    return Graph(n, chosen)


def relabeled(g, perm):
    return Graph(g.n, [(perm[a], perm[b]) for a, b in g.edges()])
