from .link import LinkSpec, MesoLink, QueueSlot, derived_storage_capacity
from .network import NETWORK_COLUMNS, dump_network, load_network, parse_network, write_network

__all__ = [
    "NETWORK_COLUMNS",
    "LinkSpec",
    "MesoLink",
    "QueueSlot",
    "derived_storage_capacity",
    "dump_network",
    "load_network",
    "parse_network",
    "write_network",
]
