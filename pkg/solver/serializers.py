# solver/serializers.py
from rest_framework import serializers

from graphs.multigraph import format_rational
from graphs.serializers import dump_drawing


class ExactValueField(serializers.Field):
    """ Exact rational written as a "p/q" (or integer) string. """

    def to_representation(self, value):
        return format_rational(value)


class SolveStatsSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    k = serializers.IntegerField()
    branches = serializers.IntegerField()
    infeasible_branches = serializers.IntegerField()
    ledger_total = ExactValueField()
    wall_ms = serializers.FloatField()

    def __init__(self, *args, omit_timing=False, **kwargs):
        super().__init__(*args, **kwargs)
        if omit_timing:
            self.fields.pop('wall_ms')


class CutSolutionSerializer(serializers.Serializer):
    value = ExactValueField()
    partition = serializers.SerializerMethodField()
    stats = serializers.SerializerMethodField()

    def get_partition(self, obj):
        return {str(v): side for v, side in sorted(obj.side.items())}

    def get_stats(self, obj):
        return SolveStatsSerializer(obj.stats, omit_timing=self.context.get('omit_timing', False)).data


class SolveOptionsSerializer(serializers.Serializer):
    jobs = serializers.IntegerField(min_value=1, required=False)
    omit_timing = serializers.BooleanField(default=False)


class OracleOptionsSerializer(serializers.Serializer):
    constraints = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(), min_length=2, max_length=2),
        required=False,
    )


def dump_solution(solution, omit_timing=False) -> dict:
    return CutSolutionSerializer(solution, context={'omit_timing': omit_timing}).data


def dump_leaf(outcome) -> dict:
    """ Debug dump of one solved branch leaf. """
    leaf = outcome.leaf
    return {
        'mask': leaf.mask,
        'drawing': dump_drawing(leaf.drawing),
        'pseudo_faces': [pf.as_dict() for pf in leaf.pseudo_faces],
        'constraints': [list(pair) for pair in leaf.constraints],
        'ledger': [entry.as_dict() for entry in leaf.ledger.entries],
        'ledger_total': format_rational(leaf.ledger.total),
        'feasible': outcome.feasible,
        'value': format_rational(outcome.cut.value) if outcome.feasible else None,
        'reason': outcome.reason,
    }
