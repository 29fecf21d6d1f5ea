"""Exhaustive generation of simple drawings of complete and complete bipartite graphs."""
