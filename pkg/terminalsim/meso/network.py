"""Reading and writing meso network documents.

A network document is a CSV file with the header::

    link_id,from,to,length_m,area_m2,v_free_mps,fc_agents_per_s,sc_agents

An empty ``sc_agents`` derives the storage capacity from the area.
"""

import csv
import io
import logging
from pathlib import Path

from pydantic import ValidationError

from ..domain.exceptions import NetworkDocumentError
from .link import LinkSpec

LOGGER = logging.getLogger(__name__)

NETWORK_COLUMNS = (
    "link_id",
    "from",
    "to",
    "length_m",
    "area_m2",
    "v_free_mps",
    "fc_agents_per_s",
    "sc_agents",
)


def parse_network(text: str, source: str = "<network>") -> list[LinkSpec]:
    """Parse network CSV text.

    Raises:
        NetworkDocumentError: On a wrong header, a bad number, an invalid
            parameter or a duplicate link id.
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(f.strip() for f in reader.fieldnames) != NETWORK_COLUMNS:
        raise NetworkDocumentError(f"{source}: header must be {','.join(NETWORK_COLUMNS)}")
    links: list[LinkSpec] = []
    seen: set[str] = set()
    for number, raw in enumerate(reader, start=2):
        row = {key.strip(): (value or "").strip() for key, value in raw.items() if key}
        if not any(row.values()):
            continue
        sc = row["sc_agents"]
        try:
            link = LinkSpec(
                id=row["link_id"],
                from_node=row["from"],
                to_node=row["to"],
                length_m=float(row["length_m"]),
                area_m2=float(row["area_m2"]),
                free_speed=float(row["v_free_mps"]),
                flow_capacity=float(row["fc_agents_per_s"]),
                storage_capacity=int(sc) if sc else None,
            )
        except ValueError as exc:
            # ValidationError is a ValueError
            detail = exc.errors()[0]["msg"] if isinstance(exc, ValidationError) else str(exc)
            raise NetworkDocumentError(f"{source}: line {number}: {detail}") from None
        if link.id in seen:
            raise NetworkDocumentError(f"{source}: line {number}: duplicate link id {link.id!r}")
        seen.add(link.id)
        links.append(link)
    return links


def load_network(path: Path | str) -> list[LinkSpec]:
    path = Path(path)
    links = parse_network(path.read_text(encoding="utf-8"), source=str(path))
    LOGGER.debug("Loaded network", extra={"path": str(path), "links": len(links)})
    return links


def dump_network(links: list[LinkSpec]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(NETWORK_COLUMNS)
    for link in links:
        writer.writerow(
            [
                link.id,
                link.from_node,
                link.to_node,
                repr(link.length_m),
                repr(link.area_m2),
                repr(link.free_speed),
                repr(link.flow_capacity),
                "" if link.storage_capacity is None else link.storage_capacity,
            ]
        )
    return buffer.getvalue()


def write_network(links: list[LinkSpec], path: Path | str) -> Path:
    path = Path(path)
    path.write_text(dump_network(links), encoding="utf-8")
    return path
