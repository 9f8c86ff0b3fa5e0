from rest_framework import status
from rest_framework.views import APIView
from rest_framework.response import Response
from rest_framework.permissions import AllowAny

from config.constants import ACTION_CHOICES, CASE_CHOICES
from config.logger import get_logger
from .models import ConvergenceRun
from .serializers import ConvergenceRunDetailSerializer, ConvergenceRunSerializer

logger = get_logger(__name__)


class ConvergenceRunListView(APIView):
    """Stored convergence sweeps, newest first"""
    permission_classes = [AllowAny]

    def get(self, request):
        """
        List runs, optionally filtered

        Query params:
            case: 1, 2, 3 or 4
            action: J, I or L
        """
        runs = ConvergenceRun.objects.all()

        case = request.query_params.get('case', '')
        action = request.query_params.get('action', '')

        if case:
            if case not in {str(value) for value, _ in CASE_CHOICES}:
                return Response(
                    {'error': 'Invalid case', 'details': f'case must be one of 1, 2, 3, 4, got {case!r}'},
                    status=status.HTTP_400_BAD_REQUEST
                )
            runs = runs.filter(case=int(case))

        if action:
            action = action.upper()
            if action not in {value for value, _ in ACTION_CHOICES}:
                return Response(
                    {'error': 'Invalid action', 'details': f'action must be one of J, I, L, got {action!r}'},
                    status=status.HTTP_400_BAD_REQUEST
                )
            runs = runs.filter(action=action)

        logger.debug(f"Listing convergence runs case={case or '*'} action={action or '*'}")
        return Response({
            'runs': ConvergenceRunSerializer(runs, many=True).data
        }, status=status.HTTP_200_OK)


class ConvergenceRunDetailView(APIView):
    """One stored sweep with its records"""
    permission_classes = [AllowAny]

    def get(self, request, run_id):
        try:
            run = ConvergenceRun.objects.prefetch_related('records').get(pk=run_id)
        except ConvergenceRun.DoesNotExist:
            return Response(
                {'error': 'Run not found', 'details': f'no convergence run with id {run_id}'},
                status=status.HTTP_404_NOT_FOUND
            )

        return Response({
            'run': ConvergenceRunDetailSerializer(run).data
        }, status=status.HTTP_200_OK)
