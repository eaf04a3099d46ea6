"""
Connection graph and shortest-path deformation.

Vertices are stationary points, finite endpoints, exits, entrances and
valleys. Straight ball lines join vertices sharing a ball (and centres of
overlapping balls); each traced contour contributes one edge from its origin
to its terminal. Dijkstra then picks the chain with fewest edges, breaking
ties by geometric length.
"""

import cmath
import heapq
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from modules.engine.errors import DeformationNotFoundError
from modules.engine.phase_geometry import ExitPoint, NonOscRegion
from modules.engine.sd_tracer import Entrance, SDPath, Valley

# Relative slack when deciding whether a boundary point lies in a ball
MEMBERSHIP_SLACK = 1e-10


class VertexKind(str, Enum):
    STATIONARY = "stationary"
    FINITE_ENDPOINT = "finite_endpoint"
    EXIT = "exit"
    ENTRANCE = "entrance"
    VALLEY = "valley"


class EdgeKind(str, Enum):
    BALL_LINE = "ball_line"
    SD_CONTOUR = "sd_contour"


@dataclass(frozen=True)
class Vertex:
    kind: VertexKind
    location: complex
    ball: Optional[int] = None
    angle: Optional[float] = None

    @property
    def is_finite(self) -> bool:
        return self.kind is not VertexKind.VALLEY


@dataclass(frozen=True)
class Edge:
    kind: EdgeKind
    u: int
    v: int
    weight: float = 1.0
    length: float = 0.0
    path: Optional[SDPath] = field(default=None, compare=False, repr=False)

    def other(self, vertex: int) -> int:
        return self.v if vertex == self.u else self.u


@dataclass
class DeformationGraph:
    vertices: List[Vertex] = field(default_factory=list)
    edges: List[Edge] = field(default_factory=list)
    adjacency: Dict[int, List[int]] = field(default_factory=dict)
    endpoint_vertices: Tuple[int, ...] = ()

    def add_vertex(self, vertex: Vertex) -> int:
        self.vertices.append(vertex)
        index = len(self.vertices) - 1
        self.adjacency[index] = []
        return index

    def add_edge(self, edge: Edge) -> int:
        self.edges.append(edge)
        index = len(self.edges) - 1
        self.adjacency[edge.u].append(index)
        if edge.v != edge.u:
            self.adjacency[edge.v].append(index)
        return index

    def has_line(self, u: int, v: int) -> bool:
        return any(
            self.edges[e].kind is EdgeKind.BALL_LINE and self.edges[e].other(u) == v
            for e in self.adjacency[u]
        )


@dataclass(frozen=True)
class OrientedEdge:
    edge: Edge
    sign: int
    start: int
    end: int


@dataclass(frozen=True)
class QuasiSDDeformation:
    """Ordered chain of oriented edges from the start vertex to the end vertex."""

    legs: Tuple[OrientedEdge, ...]
    vertices: Tuple[Vertex, ...]
    start: int
    end: int

    def __len__(self) -> int:
        return len(self.legs)

    def path_vertices(self) -> List[int]:
        if not self.legs:
            return [self.start]
        return [self.legs[0].start] + [leg.end for leg in self.legs]


@dataclass(frozen=True)
class Endpoint:
    """Finite point or infinite direction (angle reduced mod 2 pi)."""

    value: Optional[complex] = None
    angle: Optional[float] = None

    @classmethod
    def finite(cls, z: complex) -> "Endpoint":
        return cls(value=complex(z))

    @classmethod
    def infinite(cls, angle: float) -> "Endpoint":
        return cls(angle=float(angle) % (2.0 * math.pi))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        if self.is_infinite:
            return f"inf:{self.angle!r}"
        return f"{self.value.real!r},{self.value.imag!r}"


def _in_ball(z: complex, region: NonOscRegion, index: int) -> bool:
    ball = region.balls[index]
    return abs(z - ball.center) <= ball.radius * (1.0 + MEMBERSHIP_SLACK)


def build_graph(
    region: NonOscRegion,
    exit_points: Sequence[ExitPoint],
    endpoints: Sequence[Endpoint],
    valley_angles: Sequence[float],
    paths: Sequence[SDPath],
) -> DeformationGraph:
    """
    Assemble vertices and the three kinds of edges.

    `paths` are the traced contours; the origin of each must be an exit or a
    finite endpoint, and its terminal becomes an Entrance or Valley vertex.
    The graph's endpoint_vertices follow the order of `endpoints`.
    """
    graph = DeformationGraph()

    stationary = [
        graph.add_vertex(Vertex(VertexKind.STATIONARY, ball.center, ball=index))
        for index, ball in enumerate(region.balls)
    ]
    valley_vertex = {
        angle: graph.add_vertex(Vertex(VertexKind.VALLEY, cmath.rect(1.0, angle), angle=angle))
        for angle in valley_angles
    }

    endpoint_ids = []
    finite_endpoint_at: Dict[complex, int] = {}
    for endpoint in endpoints:
        if endpoint.is_infinite:
            endpoint_ids.append(valley_vertex[endpoint.angle])
        else:
            vid = finite_endpoint_at.get(endpoint.value)
            if vid is None:
                vid = graph.add_vertex(Vertex(VertexKind.FINITE_ENDPOINT, endpoint.value))
                finite_endpoint_at[endpoint.value] = vid
            endpoint_ids.append(vid)
    graph.endpoint_vertices = tuple(endpoint_ids)

    exit_at: Dict[complex, int] = {}
    for exit_point in exit_points:
        exit_at[exit_point.location] = graph.add_vertex(
            Vertex(VertexKind.EXIT, exit_point.location, ball=exit_point.owner)
        )

    # (c) one edge per traced contour
    sd_edges = []
    for path in paths:
        origin = exit_at.get(path.origin, finite_endpoint_at.get(path.origin))
        if origin is None:
            raise DeformationNotFoundError(f"traced contour starts at unknown vertex {path.origin}")
        terminal = path.terminal
        if isinstance(terminal, Entrance):
            target = graph.add_vertex(Vertex(VertexKind.ENTRANCE, terminal.point, ball=terminal.ball))
        else:
            target = valley_vertex[terminal.angle]
        sd_edges.append(Edge(EdgeKind.SD_CONTOUR, origin, target, length=path.arc_length(), path=path))

    # (a) all pairs of finite vertices sharing a ball
    for index in range(len(region.balls)):
        members = []
        for vid, vertex in enumerate(graph.vertices):
            if not vertex.is_finite:
                continue
            owned = vertex.kind in (VertexKind.EXIT, VertexKind.ENTRANCE) and vertex.ball == index
            if vertex.kind is VertexKind.STATIONARY:
                inside = vid == stationary[index] or _in_ball(vertex.location, region, index)
            else:
                inside = owned or _in_ball(vertex.location, region, index)
            if inside:
                members.append(vid)
        for pos, u in enumerate(members):
            for v in members[pos + 1:]:
                if not graph.has_line(u, v):
                    length = abs(graph.vertices[u].location - graph.vertices[v].location)
                    graph.add_edge(Edge(EdgeKind.BALL_LINE, u, v, length=length))

    # (b) centres of overlapping balls
    for i, first in enumerate(region.balls):
        for j in range(i + 1, len(region.balls)):
            second = region.balls[j]
            if abs(first.center - second.center) <= first.radius + second.radius:
                u, v = stationary[i], stationary[j]
                if not graph.has_line(u, v):
                    graph.add_edge(Edge(EdgeKind.BALL_LINE, u, v, length=abs(first.center - second.center)))

    for edge in sd_edges:
        graph.add_edge(edge)

    return graph


def shortest_path(graph: DeformationGraph, start: int, end: int) -> List[int]:
    """
    Dijkstra over (edge count, length) pairs compared lexicographically.

    Returns the edge indices along the path from start to end.
    """
    if start == end:
        return []

    n = len(graph.vertices)
    best: List[Tuple[float, float]] = [(math.inf, math.inf)] * n
    via_edge: List[Optional[int]] = [None] * n
    best[start] = (0.0, 0.0)
    heap = [(0.0, 0.0, start)]
    done = [False] * n

    while heap:
        hops, length, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == end:
            break
        for e in graph.adjacency[u]:
            edge = graph.edges[e]
            v = edge.other(u)
            if done[v]:
                continue
            candidate = (hops + edge.weight, length + edge.length)
            if candidate < best[v]:
                best[v] = candidate
                via_edge[v] = e
                heapq.heappush(heap, (candidate[0], candidate[1], v))

    if via_edge[end] is None:
        raise DeformationNotFoundError(
            f"deformation not found: no path from {graph.vertices[start].kind.value} "
            f"to {graph.vertices[end].kind.value}"
        )

    chain = []
    vertex = end
    while vertex != start:
        e = via_edge[vertex]
        chain.append(e)
        vertex = graph.edges[e].other(vertex)
    chain.reverse()
    return chain


def orient(graph: DeformationGraph, chain: Sequence[int], start: int) -> QuasiSDDeformation:
    """Tag each edge +1 when walked from its stored first vertex, else -1."""
    legs = []
    current = start
    for e in chain:
        edge = graph.edges[e]
        if edge.u == current:
            legs.append(OrientedEdge(edge, +1, edge.u, edge.v))
            current = edge.v
        else:
            legs.append(OrientedEdge(edge, -1, edge.v, edge.u))
            current = edge.u
    return QuasiSDDeformation(legs=tuple(legs), vertices=tuple(graph.vertices), start=start, end=current)


def reverse(deformation: QuasiSDDeformation) -> QuasiSDDeformation:
    """The same chain walked from the other end."""
    legs = tuple(
        OrientedEdge(leg.edge, -leg.sign, leg.end, leg.start) for leg in reversed(deformation.legs)
    )
    return QuasiSDDeformation(legs=legs, vertices=deformation.vertices, start=deformation.end, end=deformation.start)
