from django.db import models

from config.constants import ACTION_CHOICES, CASE_CHOICES


class ConvergenceRun(models.Model):
    """One refinement sweep of a catalogue case under one action kind"""

    case = models.PositiveSmallIntegerField(choices=CASE_CHOICES)
    action = models.CharField(max_length=1, choices=ACTION_CHOICES)
    n_list = models.CharField(max_length=255)  # comma-separated N values

    # Power-law fit rel_err ~ prefactor * h^exponent
    exponent = models.FloatField(null=True, blank=True)
    prefactor = models.FloatField(null=True, blank=True)
    residual = models.FloatField(null=True, blank=True)

    # Quadratic fit rel_err ~ c0 + c1 h + c2 h^2
    poly_c0 = models.FloatField(null=True, blank=True)
    poly_c1 = models.FloatField(null=True, blank=True)
    poly_c2 = models.FloatField(null=True, blank=True)

    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        db_table = 'convergence_runs'
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['case', 'action'], name='convergence_case_action_idx'),
        ]

    def __str__(self):
        return f"Run {self.pk}: case {self.case} S^{self.action} N={self.n_list}"

    @property
    def sizes(self):
        return [int(n) for n in self.n_list.split(',') if n]


class ConvergenceRecord(models.Model):
    """Discrete vs exact action on one mesh of a run"""

    run = models.ForeignKey(ConvergenceRun, on_delete=models.CASCADE, related_name='records')
    N = models.PositiveIntegerField()
    h = models.FloatField()
    S_discrete = models.FloatField()
    S_exact = models.FloatField()
    rel_err = models.FloatField()

    class Meta:
        db_table = 'convergence_records'
        ordering = ['run', 'N']
        constraints = [
            models.UniqueConstraint(fields=['run', 'N'], name='unique_record_per_size'),
        ]

    def __str__(self):
        return f"N={self.N} rel_err={self.rel_err:.3e}"
