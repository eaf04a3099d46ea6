import math

import pytest

from modules.engine.deformation_graph import (
    DeformationGraph,
    Edge,
    EdgeKind,
    Endpoint,
    Vertex,
    VertexKind,
    build_graph,
    orient,
    reverse,
    shortest_path,
)
from modules.engine.errors import DeformationNotFoundError
from modules.engine.parameters import Parameters
from modules.engine.phase_geometry import (
    PhaseContext,
    amalgamate,
    exits,
    no_return_threshold,
    stationary_balls,
    stationary_points,
)
from modules.engine.sd_tracer import TracerSetup, trace
from tests.conftest import airy_phase


def _chain_graph():
    """0 - 1 - 2 - 3 by unit hops, plus a long direct 0 - 3 edge and a 0 - 4 - 3 detour."""
    graph = DeformationGraph()
    for x in range(5):
        graph.add_vertex(Vertex(VertexKind.EXIT, complex(x)))
    graph.add_edge(Edge(EdgeKind.BALL_LINE, 0, 1, length=1.0))
    graph.add_edge(Edge(EdgeKind.BALL_LINE, 1, 2, length=1.0))
    graph.add_edge(Edge(EdgeKind.BALL_LINE, 3, 2, length=1.0))
    graph.add_edge(Edge(EdgeKind.BALL_LINE, 0, 4, length=10.0))
    graph.add_edge(Edge(EdgeKind.BALL_LINE, 4, 3, length=10.0))
    return graph


def test_endpoint_angles_are_reduced():
    assert Endpoint.infinite(-math.pi / 3).angle == pytest.approx(5 * math.pi / 3)
    assert Endpoint.infinite(-math.pi / 3).is_infinite
    assert not Endpoint.finite(1 + 2j).is_infinite
    assert str(Endpoint.finite(1 + 2j)) == "1.0,2.0"
    assert str(Endpoint.infinite(0.5)).startswith("inf:")


def test_shortest_path_prefers_fewer_edges():
    graph = _chain_graph()
    # 0-4-3 has two edges, 0-1-2-3 has three
    assert shortest_path(graph, 0, 3) == [3, 4]


def test_shortest_path_breaks_ties_by_length():
    graph = _chain_graph()
    graph.add_edge(Edge(EdgeKind.BALL_LINE, 0, 2, length=2.5))
    # 0-2-3 (length 3.5) beats 0-4-3 (length 20)
    assert shortest_path(graph, 0, 3) == [5, 2]


def test_shortest_path_same_vertex_is_empty():
    assert shortest_path(_chain_graph(), 2, 2) == []


def test_disconnected_graph_raises():
    graph = _chain_graph()
    graph.add_vertex(Vertex(VertexKind.EXIT, 9j))
    with pytest.raises(DeformationNotFoundError, match="deformation not found"):
        shortest_path(graph, 0, 5)


def test_orient_follows_stored_direction():
    graph = _chain_graph()
    chain = shortest_path(graph, 0, 3)
    deformation = orient(graph, [0, 1, 2], 0)
    assert [leg.sign for leg in deformation.legs] == [1, 1, -1]
    assert deformation.path_vertices() == [0, 1, 2, 3]
    assert orient(graph, chain, 0).end == 3


def test_reverse_flips_signs_and_order():
    graph = _chain_graph()
    deformation = orient(graph, [0, 1, 2], 0)
    back = reverse(deformation)
    assert back.start == 3 and back.end == 0
    assert [leg.sign for leg in back.legs] == [1, -1, -1]
    assert back.path_vertices() == [3, 2, 1, 0]
    assert reverse(back) == deformation


def _airy_graph(x):
    ctx = PhaseContext.build(airy_phase(x), 1.0)
    params = Parameters(n_points=30)
    points = stationary_points(ctx)
    region = amalgamate(stationary_balls(points, ctx, params.c_ball, params.n_ball), params.delta_ball_for(3))
    exit_points = exits(region, ctx)
    setup = TracerSetup.from_parameters(ctx, region, no_return_threshold(ctx), points, params)
    paths = [trace(e.location, setup) for e in exit_points]
    ends = (Endpoint.infinite(5 * math.pi / 3), Endpoint.infinite(math.pi / 3))
    return build_graph(region, exit_points, ends, ctx.valleys, paths), region


def test_airy_graph_at_coalescence():
    graph, region = _airy_graph(0.0)
    assert len(region.balls) == 1
    start, end = graph.endpoint_vertices
    assert graph.vertices[start].kind is VertexKind.VALLEY
    chain = shortest_path(graph, start, end)
    kinds = [graph.edges[e].kind for e in chain]
    assert sorted(kinds) == [EdgeKind.BALL_LINE, EdgeKind.SD_CONTOUR, EdgeKind.SD_CONTOUR]
    assert kinds[1] is EdgeKind.BALL_LINE


def test_airy_graph_with_separated_stationary_points():
    graph, region = _airy_graph(5.0)
    assert len(region.balls) == 2
    start, end = graph.endpoint_vertices
    chain = shortest_path(graph, start, end)
    kinds = [graph.edges[e].kind for e in chain]
    assert kinds.count(EdgeKind.SD_CONTOUR) == 2
    assert kinds.count(EdgeKind.BALL_LINE) == 1


def test_ball_lines_join_members_of_the_same_ball():
    graph, region = _airy_graph(0.0)
    members = [
        i for i, v in enumerate(graph.vertices)
        if v.kind in (VertexKind.EXIT, VertexKind.STATIONARY) and v.ball == 0
    ]
    for pos, u in enumerate(members):
        for v in members[pos + 1:]:
            assert graph.has_line(u, v)
