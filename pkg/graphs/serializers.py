# graphs/serializers.py
"""
JSON schema for drawings.

Two formats share one document shape:

  combinatorial: {"format": "combinatorial",
                  "nodes": [{"id", "kind": "vertex"|"crossing", "rotation": [...]}],
                  "edges": [{"id", "u", "v", "weight", "segments": [...]}],
                  "next_id": optional}
  geometric:     {"format": "geometric",
                  "vertices": [{"id", "x", "y"}],
                  "edges": [{"id", "u", "v", "weight", "bends": [[x, y], ...]}]}

Weights and coordinates are integers or "p/q" strings. A rotation entry is a
segment id, or [segment id, "tail"|"head"] to order the two ends of a loop.
"""
import logging

from rest_framework import serializers

from .embedding import CROSSING, HEAD, TAIL, VERTEX, DrawnInstance, assemble, ensure_valid
from .exceptions import DrawingError, GraphError
from .geometry import detect_crossings
from .multigraph import as_rational, format_rational

logger = logging.getLogger(__name__)

COMBINATORIAL = 'combinatorial'
GEOMETRIC = 'geometric'


class RationalField(serializers.Field):
    default_error_messages = {
        'invalid': 'Expected an integer or a "p/q" string.',
    }

    def to_internal_value(self, data):
        try:
            return as_rational(data)
        except GraphError as exc:
            raise serializers.ValidationError(str(exc))

    def to_representation(self, value):
        if value.denominator == 1:
            return value.numerator
        return format_rational(value)


class RotationEntryField(serializers.Field):
    def to_internal_value(self, data):
        if isinstance(data, bool):
            self.fail_entry(data)
        if isinstance(data, int):
            return data
        if isinstance(data, (list, tuple)) and len(data) == 2:
            sid, end = data
            if isinstance(sid, int) and not isinstance(sid, bool) and end in ('tail', 'head'):
                return (sid, TAIL if end == 'tail' else HEAD)
        self.fail_entry(data)

    def fail_entry(self, data):
        raise serializers.ValidationError(f'Rotation entry {data!r} must be a segment id or [id, "tail"|"head"].')

    def to_representation(self, value):
        if isinstance(value, tuple):
            return [value[0], 'tail' if value[1] == TAIL else 'head']
        return value


class NodeSerializer(serializers.Serializer):
    id = serializers.IntegerField(min_value=0)
    kind = serializers.ChoiceField(choices=[VERTEX, CROSSING], default=VERTEX)
    rotation = serializers.ListField(child=RotationEntryField(), allow_empty=True)


class EdgeSerializer(serializers.Serializer):
    id = serializers.IntegerField(min_value=0)
    u = serializers.IntegerField(min_value=0)
    v = serializers.IntegerField(min_value=0)
    weight = RationalField(default=1)
    segments = serializers.ListField(child=serializers.IntegerField(min_value=0), required=False)


class CombinatorialDrawingSerializer(serializers.Serializer):
    format = serializers.ChoiceField(choices=[COMBINATORIAL])
    nodes = NodeSerializer(many=True)
    edges = EdgeSerializer(many=True)
    next_id = serializers.IntegerField(min_value=0, required=False)

    def validate(self, attrs):
        node_ids = [n['id'] for n in attrs['nodes']]
        if len(set(node_ids)) != len(node_ids):
            raise serializers.ValidationError("Node ids must be unique.")
        edge_ids = [e['id'] for e in attrs['edges']]
        if len(set(edge_ids)) != len(edge_ids):
            raise serializers.ValidationError("Edge ids must be unique.")
        return attrs

    def to_drawing(self) -> DrawnInstance:
        data = self.validated_data
        vertices = [n['id'] for n in data['nodes'] if n['kind'] == VERTEX]
        crossings = [n['id'] for n in data['nodes'] if n['kind'] == CROSSING]
        edges = [(e['id'], e['u'], e['v'], e['weight']) for e in data['edges']]
        edge_segments = {e['id']: e.get('segments') or [e['id']] for e in data['edges']}
        rotation = {n['id']: n['rotation'] for n in data['nodes']}
        try:
            return assemble(vertices, crossings, edges, edge_segments, rotation, data.get('next_id'))
        except GraphError as exc:
            raise DrawingError(str(exc))


class GeometricVertexSerializer(serializers.Serializer):
    id = serializers.IntegerField(min_value=0)
    x = RationalField()
    y = RationalField()


class GeometricEdgeSerializer(serializers.Serializer):
    id = serializers.IntegerField(min_value=0)
    u = serializers.IntegerField(min_value=0)
    v = serializers.IntegerField(min_value=0)
    weight = RationalField(default=1)
    bends = serializers.ListField(
        child=serializers.ListField(child=RationalField(), min_length=2, max_length=2),
        required=False,
        default=list,
    )


class GeometricDrawingSerializer(serializers.Serializer):
    format = serializers.ChoiceField(choices=[GEOMETRIC])
    vertices = GeometricVertexSerializer(many=True)
    edges = GeometricEdgeSerializer(many=True)

    def validate(self, attrs):
        ids = [v['id'] for v in attrs['vertices']] + [e['id'] for e in attrs['edges']]
        if len(set(ids)) != len(ids):
            raise serializers.ValidationError("Vertex and edge ids must be distinct.")
        return attrs

    def to_drawing(self) -> DrawnInstance:
        data = self.validated_data
        vertices = {v['id']: (v['x'], v['y']) for v in data['vertices']}
        edges = [(e['id'], e['u'], e['v'], e['weight'], e['bends']) for e in data['edges']]
        return detect_crossings(vertices, edges)


SERIALIZERS = {
    COMBINATORIAL: CombinatorialDrawingSerializer,
    GEOMETRIC: GeometricDrawingSerializer,
}


def load_drawing(document, check=True) -> DrawnInstance:
    """
    Parses a JSON document (already decoded) into a drawing. Raises
    DrawingError with the collected diagnostics on any schema or drawing error.
    """
    if not isinstance(document, dict):
        raise DrawingError("The document must be a JSON object.")
    fmt = document.get('format', COMBINATORIAL)
    serializer_class = SERIALIZERS.get(fmt)
    if serializer_class is None:
        raise DrawingError(f"Unknown format {fmt!r}; expected one of {sorted(SERIALIZERS)}.")
    serializer = serializer_class(data={**document, 'format': fmt})
    if not serializer.is_valid():
        logger.warning(f"Rejected {fmt} document: {serializer.errors}")
        raise DrawingError(f"Invalid {fmt} document: {_flatten(serializer.errors)}", code='invalid_document')
    drawing = serializer.to_drawing()
    return ensure_valid(drawing) if check else drawing


def _flatten(errors, prefix='') -> str:
    parts = []
    if isinstance(errors, dict):
        for key, value in errors.items():
            parts.append(_flatten(value, f"{prefix}{key}."))
    elif isinstance(errors, list):
        for i, value in enumerate(errors):
            if isinstance(value, (dict, list)):
                parts.append(_flatten(value, f"{prefix}{i}."))
            elif value:
                parts.append(f"{prefix.rstrip('.')}: {value}")
    else:
        parts.append(f"{prefix.rstrip('.')}: {errors}")
    return '; '.join(p for p in parts if p)


def dump_drawing(d: DrawnInstance) -> dict:
    """ Combinatorial document for a drawing; loop ends are written explicitly. """
    nodes = []
    for node in d.nodes:
        entries = []
        for sid, end in d.rotation[node]:
            seg = d.segments[sid]
            entries.append((sid, end) if seg.tail == seg.head else sid)
        nodes.append({'id': node, 'kind': d.kind(node), 'rotation': entries})
    edges = [
        {'id': e.id, 'u': e.u, 'v': e.v, 'weight': e.weight, 'segments': list(d.edge_segments[e.id])}
        for e in d.graph.edges.values()
    ]
    return CombinatorialDrawingSerializer({
        'format': COMBINATORIAL,
        'nodes': nodes,
        'edges': edges,
        'next_id': d.next_id,
    }).data
