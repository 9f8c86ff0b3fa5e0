from django.contrib import admin
from .models import ConvergenceRecord, ConvergenceRun


class ConvergenceRecordInline(admin.TabularInline):
    model = ConvergenceRecord
    extra = 0
    readonly_fields = ['N', 'h', 'S_discrete', 'S_exact', 'rel_err']
    can_delete = False


@admin.register(ConvergenceRun)
class ConvergenceRunAdmin(admin.ModelAdmin):
    list_display = ['id', 'case', 'action', 'n_list', 'exponent', 'prefactor', 'created_at']
    list_filter = ['case', 'action', 'created_at']
    search_fields = ['n_list']
    readonly_fields = ['id', 'created_at']
    inlines = [ConvergenceRecordInline]

    fieldsets = (
        ('Sweep', {
            'fields': ('id', 'case', 'action', 'n_list')
        }),
        ('Power-law Fit', {
            'fields': ('exponent', 'prefactor', 'residual')
        }),
        ('Quadratic Fit', {
            'fields': ('poly_c0', 'poly_c1', 'poly_c2')
        }),
        ('Timestamps', {
            'fields': ('created_at',)
        }),
    )

    ordering = ['-created_at']


@admin.register(ConvergenceRecord)
class ConvergenceRecordAdmin(admin.ModelAdmin):
    list_display = ['run', 'N', 'h', 'S_discrete', 'S_exact', 'rel_err']
    list_filter = ['run__case', 'run__action', 'N']
    ordering = ['run', 'N']
