"""
Deformation document.

Everything needed to redraw a computed deformation with any plotting tool:
balls, stationary points, exits and entrances, valleys, the no-return
threshold, traced contours, the graph, the chosen path and the quadrature
nodes of every contour. Complex numbers are written as [re, im].
"""

import json
import math
from typing import Any, Dict, List, Optional

from modules.engine.deformation_graph import EdgeKind, Endpoint, VertexKind
from modules.engine.evaluator import EvaluationRequest, EvaluationResult
from modules.engine.sd_tracer import Entrance

SCHEMA = "pathfinder-deformation/1"


def _pair(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def _finite(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None


def _endpoint(endpoint: Endpoint) -> Dict[str, Any]:
    if endpoint.is_infinite:
        return {"kind": "infinite", "angle": endpoint.angle}
    return {"kind": "finite", "value": _pair(endpoint.value)}


def _edge_id(result: EvaluationResult, edge) -> Optional[int]:
    for index, candidate in enumerate(result.graph.edges):
        if candidate is edge:
            return index
    return None


def _path_id(result: EvaluationResult, path) -> Optional[int]:
    for index, candidate in enumerate(result.paths):
        if candidate is path:
            return index
    return None


def build_document(request: EvaluationRequest, result: EvaluationResult) -> Dict[str, Any]:
    """Plain JSON-ready dictionary describing `result`."""
    region = result.region
    graph = result.graph

    stationary = [
        {"location": _pair(point), "removed": False, "ball": index}
        for index, point in enumerate(ball.center for ball in region.balls)
    ]
    stationary += [{"location": _pair(point), "removed": True, "ball": cover} for point, cover in region.removed]

    entrances = [
        {"location": _pair(path.terminal.point), "ball": path.terminal.ball}
        for path in result.paths
        if isinstance(path.terminal, Entrance)
    ]

    paths = []
    for path in result.paths:
        if isinstance(path.terminal, Entrance):
            terminal = {"kind": "entrance", "ball": path.terminal.ball, "location": _pair(path.terminal.point)}
        else:
            terminal = {"kind": "valley", "angle": path.terminal.angle}
        paths.append({
            "origin": _pair(path.origin),
            "terminal": terminal,
            "mesh": list(map(float, path.mesh)),
            "points": [_pair(z) for z in path.points],
        })

    vertices, edges = [], []
    if graph is not None:
        vertices = [
            {
                "id": index,
                "kind": vertex.kind.value,
                "location": None if vertex.kind is VertexKind.VALLEY else _pair(vertex.location),
                "ball": vertex.ball,
                "angle": vertex.angle,
            }
            for index, vertex in enumerate(graph.vertices)
        ]
        edges = [
            {
                "id": index,
                "kind": edge.kind.value,
                "u": edge.u,
                "v": edge.v,
                "length": edge.length,
                "path": _path_id(result, edge.path) if edge.kind is EdgeKind.SD_CONTOUR else None,
            }
            for index, edge in enumerate(graph.edges)
        ]

    shortest = [
        {"edge": _edge_id(result, leg.edge), "sign": leg.sign, "start": leg.start, "end": leg.end}
        for leg in result.deformation.legs
    ]

    contributions = []
    for record in result.contributions:
        contributions.append({
            "edge": _edge_id(result, record.leg.edge),
            "type": record.contour_type,
            "sign": record.sign,
            "skipped": record.skipped,
            "value": _pair(record.value),
            "nodes": [] if record.skipped else [_pair(z) for z in record.nodes],
        })

    valleys = list(result.ctx.valleys) if result.ctx is not None else []
    return {
        "schema": SCHEMA,
        "branch": result.branch,
        "request": {
            "a": _endpoint(request.a),
            "b": _endpoint(request.b),
            "g_descending": [_pair(c) for c in request.g.descending()],
            "omega": request.omega,
            "parameters": request.params.to_dict(),
        },
        "value": _pair(result.value),
        "n_total": result.n_total,
        "balls": [{"center": _pair(ball.center), "radius": ball.radius} for ball in region.balls],
        "stationary_points": stationary,
        "exits": [{"location": _pair(e.location), "ball": e.owner, "angle": e.angle} for e in result.exits],
        "entrances": entrances,
        "valleys": valleys,
        "no_return": {"r_star": _finite(result.no_return.r_star) if result.no_return is not None else None},
        "paths": paths,
        "graph": {"vertices": vertices, "edges": edges},
        "shortest_path": shortest,
        "contributions": contributions,
    }


def write_document(path: str, request: EvaluationRequest, result: EvaluationResult) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(build_document(request, result), f, indent=2, allow_nan=False)
        f.write("\n")
