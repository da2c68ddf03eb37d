from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='ComputationRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(help_text='Command group (ring, code, skew, bt, mustafin)', max_length=32)),
                ('action', models.CharField(help_text='Action within the group, e.g. hull or filtration', max_length=32)),
                ('status', models.CharField(choices=[('ok', 'OK'), ('error', 'Error')], help_text='Outcome of the run', max_length=8)),
                ('arguments', models.JSONField(default=dict, help_text='Parsed command-line options')),
                ('payload', models.JSONField(default=dict, help_text='Operation-specific report')),
                ('diagnostics', models.JSONField(default=dict, help_text='Warnings, seed and timing')),
                ('error_code', models.CharField(blank=True, default='', help_text='Machine-readable error code for failed runs', max_length=64)),
                ('elapsed_ms', models.FloatField(blank=True, help_text='Wall-clock time of the computation in milliseconds', null=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Computation Record',
                'verbose_name_plural': 'Computation Records',
                'ordering': ['-created_at'],
                'indexes': [
                    models.Index(fields=['command', 'action'], name='algebra_com_command_6c1f0e_idx'),
                    models.Index(fields=['status'], name='algebra_com_status_2b9d41_idx'),
                ],
            },
        ),
    ]
