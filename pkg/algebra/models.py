"""
Computation Records
===================
Django model storing the outcome of command runs made with ``--record``.

Location: algebra/models.py
"""

from django.db import models, transaction


class ComputationRecord(models.Model):
    """
    One executed command: its arguments, the report it produced and its diagnostics.
    """

    command = models.CharField(
        max_length=32,
        help_text="Command group (ring, code, skew, bt, mustafin)"
    )
    action = models.CharField(
        max_length=32,
        help_text="Action within the group, e.g. hull or filtration"
    )
    status = models.CharField(
        max_length=8,
        choices=[('ok', 'OK'), ('error', 'Error')],
        help_text="Outcome of the run"
    )
    arguments = models.JSONField(
        default=dict,
        help_text="Parsed command-line options"
    )
    payload = models.JSONField(
        default=dict,
        help_text="Operation-specific report"
    )
    diagnostics = models.JSONField(
        default=dict,
        help_text="Warnings, seed and timing"
    )
    error_code = models.CharField(
        max_length=64,
        blank=True,
        default='',
        help_text="Machine-readable error code for failed runs"
    )
    elapsed_ms = models.FloatField(
        null=True,
        blank=True,
        help_text="Wall-clock time of the computation in milliseconds"
    )
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']
        verbose_name = "Computation Record"
        verbose_name_plural = "Computation Records"
        indexes = [
            models.Index(fields=['command', 'action']),
            models.Index(fields=['status']),
        ]

    def __str__(self):
        return f"{self.command} {self.action} ({self.status})"

    @classmethod
    def store(cls, result) -> 'ComputationRecord':
        """Persist a CommandResult."""
        with transaction.atomic():
            return cls.objects.create(
                command=result.command,
                action=result.action,
                status=result.status,
                arguments=result.arguments,
                payload=result.payload,
                diagnostics=result.diagnostics,
                error_code=(result.error or {}).get('code', ''),
                elapsed_ms=result.diagnostics.get('elapsed_ms'),
            )
