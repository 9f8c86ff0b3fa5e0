from rest_framework import serializers

from .models import ConvergenceRecord, ConvergenceRun


class ConvergenceRecordSerializer(serializers.ModelSerializer):
    """Serializer for one mesh size of a run"""

    class Meta:
        model = ConvergenceRecord
        fields = ['N', 'h', 'S_discrete', 'S_exact', 'rel_err']
        read_only_fields = fields


class ConvergenceRunSerializer(serializers.ModelSerializer):
    """Run summary without its records"""

    case_display = serializers.CharField(source='get_case_display', read_only=True)
    action_display = serializers.CharField(source='get_action_display', read_only=True)
    fit = serializers.SerializerMethodField()

    class Meta:
        model = ConvergenceRun
        fields = ['id', 'case', 'case_display', 'action', 'action_display', 'n_list', 'fit', 'created_at']
        read_only_fields = fields

    def get_fit(self, obj):
        if obj.exponent is None:
            return None
        return {
            'exponent': obj.exponent,
            'prefactor': obj.prefactor,
            'residual': obj.residual,
            'poly': [obj.poly_c0, obj.poly_c1, obj.poly_c2],
        }


class ConvergenceRunDetailSerializer(ConvergenceRunSerializer):
    """Run summary with every record"""

    records = ConvergenceRecordSerializer(many=True, read_only=True)

    class Meta(ConvergenceRunSerializer.Meta):
        fields = ConvergenceRunSerializer.Meta.fields + ['records']
        read_only_fields = fields
