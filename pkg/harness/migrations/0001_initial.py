from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ConvergenceRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('case', models.PositiveSmallIntegerField(choices=[(1, 'Case 1 - A_x^3 sinusoidal in t'), (2, 'Case 2 - A_y^3 sinusoidal in x'), (3, 'Case 3 - A_x^1(y), A_y^2(x) with nonlinear term'), (4, 'Case 4 - constant A_x^1 = A_y^2 = 1')])),
                ('action', models.CharField(choices=[('J', 'Interpolated FEM action S^J'), ('I', 'Intermediate action S^I'), ('L', 'Simplicial gauge theory action S^L')], max_length=1)),
                ('n_list', models.CharField(max_length=255)),
                ('exponent', models.FloatField(blank=True, null=True)),
                ('prefactor', models.FloatField(blank=True, null=True)),
                ('residual', models.FloatField(blank=True, null=True)),
                ('poly_c0', models.FloatField(blank=True, null=True)),
                ('poly_c1', models.FloatField(blank=True, null=True)),
                ('poly_c2', models.FloatField(blank=True, null=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'db_table': 'convergence_runs',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['case', 'action'], name='convergence_case_action_idx')],
            },
        ),
        migrations.CreateModel(
            name='ConvergenceRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('N', models.PositiveIntegerField()),
                ('h', models.FloatField()),
                ('S_discrete', models.FloatField()),
                ('S_exact', models.FloatField()),
                ('rel_err', models.FloatField()),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='records', to='harness.convergencerun')),
            ],
            options={
                'db_table': 'convergence_records',
                'ordering': ['run', 'N'],
                'constraints': [models.UniqueConstraint(fields=('run', 'N'), name='unique_record_per_size')],
            },
        ),
    ]
