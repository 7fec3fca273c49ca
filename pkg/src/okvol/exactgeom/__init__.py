"""Exact rational polyhedral geometry: H/V conversion, lattice points, volume."""
from .polyhedron import DimensionMismatch, HPolyhedron, UnboundedError, VPolyhedron, h_to_v, v_to_h
from .lattice import count_lattice_points, lattice_points
from .volume import triangulate, volume, simplex_volume
from .rational import qvec, rat


def dd_convert(p):
    """H -> V or V -> H, depending on the input type."""
    if isinstance(p, HPolyhedron):
        return h_to_v(p)
    if isinstance(p, VPolyhedron):
        return v_to_h(p)
    raise TypeError(f"expected a polyhedron, got {type(p).__name__}")


def intersect(a, b, prune=False):
    return a.intersect(b, prune=prune)


def contains(p, x, strict=False):
    return p.contains(x, strict=strict)


__all__ = [
    "HPolyhedron", "VPolyhedron", "DimensionMismatch", "UnboundedError",
    "dd_convert", "h_to_v", "v_to_h", "intersect", "contains",
    "lattice_points", "count_lattice_points", "volume", "triangulate",
    "simplex_volume", "qvec", "rat",
]
