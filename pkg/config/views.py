import numpy as np
import scipy
from django.conf import settings
from django.db import connection
from django.utils import timezone
from rest_framework import status
from rest_framework.permissions import AllowAny
from rest_framework.response import Response
from rest_framework.views import APIView

from liealg import kernels
from .logger import get_logger

logger = get_logger(__name__)


class HealthCheckView(APIView):
    """Service status: database, numerical stack and the active SGT defaults"""
    permission_classes = [AllowAny]

    def get(self, request):
        """
        Checks:
        - Database connectivity (stored convergence runs)
        - exp of pi t^3 is diag(i, -i), so the SU(2) kernels load and agree with numpy
        """
        logger.debug("Health check requested")

        health_status = {
            'status': 'healthy',
            'timestamp': timezone.now().isoformat(),
            'service': 'SGT API',
            'versions': {'numpy': np.__version__, 'scipy': scipy.__version__},
            'defaults': {
                'bch_order': settings.SGT['BCH_ORDER'],
                'dexp_order': settings.SGT['DEXP_ORDER'],
                'n_list': settings.SGT['DEFAULT_N_LIST'],
            },
            'checks': {}
        }

        try:
            with connection.cursor() as cursor:
                cursor.execute("SELECT 1")
            health_status['checks']['database'] = 'connected'
        except Exception as e:
            health_status['status'] = 'unhealthy'
            health_status['checks']['database'] = f'error: {str(e)}'
            logger.error(f"Health check failed - database error: {str(e)}", exc_info=True)
            return Response(health_status, status=status.HTTP_503_SERVICE_UNAVAILABLE)

        u = kernels.qmatrix(kernels.qexp(np.array([0.0, 0.0, np.pi])))
        if not np.allclose(u, np.diag([1j, -1j]), atol=1e-14):
            health_status['status'] = 'unhealthy'
            health_status['checks']['kernels'] = 'exp(pi t^3) mismatch'
            logger.error(f"Health check failed - exp(pi t^3) = {u.tolist()}")
            return Response(health_status, status=status.HTTP_503_SERVICE_UNAVAILABLE)
        health_status['checks']['kernels'] = 'ok'

        logger.debug("Health check passed")
        return Response(health_status, status=status.HTTP_200_OK)
