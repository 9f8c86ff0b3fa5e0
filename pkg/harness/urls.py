from django.urls import path
from .views import ConvergenceRunDetailView, ConvergenceRunListView

urlpatterns = [
    path('runs/', ConvergenceRunListView.as_view(), name='list-convergence-runs'),
    path('runs/<int:run_id>/', ConvergenceRunDetailView.as_view(), name='get-convergence-run'),
]
