"""Generalised BGP reflection functors on chain-complex valued representations
of Grothendieck constructions of bipartite diagrams of finite categories."""

__version__ = "0.1.0"
