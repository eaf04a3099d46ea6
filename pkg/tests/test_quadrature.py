import math

import numpy as np
import pytest

from modules.engine.amplitude import Amplitude
from modules.engine.deformation_graph import (
    DeformationGraph,
    Edge,
    EdgeKind,
    OrientedEdge,
    QuasiSDDeformation,
    Vertex,
    VertexKind,
)
from modules.engine.errors import InputError
from modules.engine.evaluator import EvaluationRequest, Endpoint, evaluate
from modules.engine.parameters import Parameters
from modules.engine.phase_geometry import NonOscRegion, NoReturnData, PhaseContext
from modules.engine.polynomial import ComplexPolynomial
from modules.engine.quadrature import (
    assemble,
    classify,
    contribution_scale,
    gauss_laguerre,
    gauss_legendre,
    total_nodes,
    truncation_length,
    type1,
    type2_laguerre,
    type2_legendre,
    type3,
)
from modules.engine.sd_tracer import Entrance, SDPath, TracerSetup, Valley

LINEAR = ComplexPolynomial.from_descending([1, 0])


@pytest.mark.parametrize("n", [1, 2, 3, 5, 10, 20, 30, 45, 60])
def test_legendre_rule_is_exact_to_degree_2n_minus_1(n):
    rule = gauss_legendre(n)
    assert rule.nodes.size == n
    for k in range(2 * n):
        exact = 2.0 / (k + 1) if k % 2 == 0 else 0.0
        approx = float(np.sum(rule.weights * rule.nodes ** k))
        assert approx == pytest.approx(exact, rel=1e-13, abs=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 10, 15, 20, 30, 45, 60])
def test_laguerre_rule_is_exact_to_degree_2n_minus_1(n):
    rule = gauss_laguerre(n)
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)
    for k in range(2 * n):
        # positive terms, compared against k! as a float
        approx = math.fsum(float(w) * float(x) ** k for w, x in zip(rule.weights, rule.nodes))
        assert approx == pytest.approx(float(math.factorial(k)), rel=1e-13), k


def test_rules_are_cached_and_read_only():
    assert gauss_legendre(12) is gauss_legendre(12)
    with pytest.raises(ValueError):
        gauss_laguerre(12).nodes[0] = 0.0


def test_rule_size_must_be_positive():
    with pytest.raises(InputError):
        gauss_legendre(0)


def test_type1_on_linear_phase():
    ctx = PhaseContext.build(LINEAR, 10.0)
    value = type1(-1.0, 1.0, Amplitude.one(), ctx, 30)
    assert value == pytest.approx(2 * math.sin(10.0) / 10.0, abs=1e-14)
    assert type1(0.5, 0.5, Amplitude.one(), ctx, 30) == 0j


def _ray(eta, omega=1.0, n=30):
    """Exact contour of g(z) = z from eta: h(p) = eta + ip."""
    ctx = PhaseContext.build(LINEAR, omega)
    setup = TracerSetup(ctx, NonOscRegion(()), NoReturnData(0.0), ())
    p_end = (gauss_laguerre(n).nodes[-1] + 1.0) / omega
    return ctx, SDPath(eta, [0.0, p_end], [eta, eta + 1j * p_end], Valley(math.pi / 2), setup, complex(eta))


def test_type2_laguerre_on_exact_ray():
    ctx, path = _ray(0.0)
    value = type2_laguerre(path, Amplitude.one(), ctx, 30, 1e-13)
    # integral of e^{iz} from 0 to i infinity
    assert value == pytest.approx(1j, abs=1e-14)


def test_type2_laguerre_keeps_nodes():
    ctx, path = _ray(0.0)
    kept = []
    type2_laguerre(path, Amplitude.one(), ctx, 8, 1e-13, kept)
    np.testing.assert_allclose(kept[0], 1j * gauss_laguerre(8).nodes, atol=1e-12)


def test_type2_legendre_matches_laguerre():
    ctx, path = _ray(0.5)
    f = Amplitude.polynomial([1, 0, 1])
    laguerre = type2_laguerre(path, f, ctx, 40, 1e-13)
    legendre = type2_legendre(path, f, ctx, 40, 1e-16, 1.0)
    assert legendre == pytest.approx(laguerre, abs=1e-13)


def test_truncation_length():
    ctx, path = _ray(0.0)
    assert truncation_length(path, ctx, 1e-16, 0.0) == pytest.approx(16 * math.log(10))
    # delta_quad = 0 falls back to the floor
    assert truncation_length(path, ctx, 0.0, 0.0) == pytest.approx(16 * math.log(10))


def test_type3_covers_a_finite_contour():
    ctx = PhaseContext.build(LINEAR, 1.0)
    setup = TracerSetup(ctx, NonOscRegion(()), NoReturnData(0.0), ())
    path = SDPath(0j, [0.0, 2.0], [0j, 2j], Entrance(ball=0, point=2j), setup, 0j)
    value = type3(path, Amplitude.one(), ctx, 30, 1e-16, 1.0)
    # integral of e^{iz} from 0 to 2i
    assert value == pytest.approx(1j * (1 - math.exp(-2.0)), abs=1e-14)


def _two_leg_deformation():
    ctx, path = _ray(0.0)
    graph = DeformationGraph()
    a = graph.add_vertex(Vertex(VertexKind.FINITE_ENDPOINT, 1.0))
    b = graph.add_vertex(Vertex(VertexKind.FINITE_ENDPOINT, 0j))
    v = graph.add_vertex(Vertex(VertexKind.VALLEY, 1j, angle=math.pi / 2))
    line = Edge(EdgeKind.BALL_LINE, a, b, length=1.0)
    contour = Edge(EdgeKind.SD_CONTOUR, b, v, length=path.arc_length(), path=path)
    graph.add_edge(line)
    graph.add_edge(contour)
    legs = (OrientedEdge(line, 1, a, b), OrientedEdge(contour, 1, b, v))
    return ctx, QuasiSDDeformation(legs, tuple(graph.vertices), a, v)


def test_classify_and_assemble():
    ctx, deformation = _two_leg_deformation()
    assert [classify(leg) for leg in deformation.legs] == [1, 2]
    total, contributions = assemble(deformation, Amplitude.one(), ctx, 30, keep_nodes=True)
    # integral of e^{iz} from 1 to i infinity
    assert total == pytest.approx(1j * np.exp(1j), abs=1e-14)
    assert [c.contour_type for c in contributions] == [1, 2]
    assert total_nodes(contributions) == 60
    assert all(c.nodes.size == 30 for c in contributions)
    assert contribution_scale(deformation, ctx) == pytest.approx(1.0)


def test_assemble_with_legendre_type2_rule():
    ctx, deformation = _two_leg_deformation()
    total, _ = assemble(deformation, Amplitude.one(), ctx, 30, type2_rule="legendre")
    assert total == pytest.approx(1j * np.exp(1j), abs=1e-13)
    with pytest.raises(InputError):
        assemble(deformation, Amplitude.one(), ctx, 30, type2_rule="simpson")


def test_negligible_contours_are_skipped():
    req = EvaluationRequest(
        a=Endpoint.finite(0j),
        b=Endpoint.finite(20j),
        g=LINEAR,
        omega=1.0,
        params=Parameters(n_points=30, delta_quad=1e-6),
    )
    result = evaluate(req)
    assert result.branch == "linear"
    assert result.skipped == 1
    assert result.contributing == 1
    assert result.n_total == 30
    assert result.value == pytest.approx(1j, abs=3e-9)


def test_skipping_disabled_keeps_every_contour():
    req = EvaluationRequest(
        a=Endpoint.finite(0j),
        b=Endpoint.finite(20j),
        g=LINEAR,
        omega=1.0,
        params=Parameters(n_points=30, delta_quad=0.0),
    )
    result = evaluate(req)
    assert result.skipped == 0
    assert result.value == pytest.approx(1j * (1 - math.exp(-20.0)), abs=1e-14)
