from pydantic import BaseModel, ConfigDict, Field


class Plan(BaseModel):
    """Route of one agent over the global graph.

    Attributes:
        agent_id: Agent identity.
        nodes: Global node sequence from origin to destination.
        departure: Departure time in seconds; fixed across iterations.
        group: Demand tag (e.g. ``WH:board``).
        score: Score of the last executed iteration, if any.
    """

    model_config = ConfigDict(frozen=True)

    agent_id: str
    nodes: tuple[str, ...] = Field(min_length=1)
    departure: float = Field(ge=0)
    group: str = ""
    score: float | None = None

    @property
    def origin(self) -> str:
        return self.nodes[0]

    @property
    def destination(self) -> str:
        return self.nodes[-1]

    def edges(self) -> list[tuple[str, str]]:
        return list(zip(self.nodes, self.nodes[1:]))
