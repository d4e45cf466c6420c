"""Device mapping: routing, CNOT orientation, basis rewriting and text emission."""
from .emit import emit, parse
from .rewrite import rewrite_basis, transpile
from .routing import (RoutedCircuit, compact, find_path_layout, orient_cnots, route,
                      routed_equivalent)
from .topology import (DeviceTopology, bundled_topologies, ladder, line, load_topology,
                       zigzag)

__all__ = [
    "DeviceTopology", "RoutedCircuit", "bundled_topologies", "compact", "emit",
    "find_path_layout", "ladder", "line", "load_topology", "orient_cnots", "parse",
    "rewrite_basis", "route", "routed_equivalent", "transpile", "zigzag",
]
