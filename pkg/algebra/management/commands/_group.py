"""
Shared base for the computation commands.

Location: algebra/management/commands/_group.py
"""

from django.core.management.base import BaseCommand, CommandError

from algebra import cli


class GroupCommand(BaseCommand):
    """Management command exposing one group of algebra.cli actions."""

    group = ''
    title = ''

    def add_arguments(self, parser):
        cli.configure_group(parser, self.group)

    def run_from_argv(self, argv):
        super().run_from_argv(argv[:2] + cli.join_expression_values(argv[2:]))

    def handle(self, *args, **options):
        result = cli.execute(self.group, options)
        if options.get('json'):
            self.stdout.write(result.render_json())
        else:
            self.render(result)
        if not result.ok:
            raise CommandError(result.error['message'], returncode=result.exit_code)

    def render(self, result):
        self.stdout.write("=" * 80)
        self.stdout.write(f"{self.title}: {result.action.upper()}")
        self.stdout.write("=" * 80)

        if not result.ok:
            self.stdout.write(self.style.ERROR(f"\n❌ {result.error['code']}: {result.error['message']}"))
            return

        scalars = {k: v for k, v in result.payload.items() if isinstance(v, (bool, int, str))}
        if scalars:
            self.stdout.write("\n📊 Results:")
            for key, value in scalars.items():
                self.stdout.write(f"   {key}: {value}")

        table = result.render_table()
        if table:
            self.stdout.write("")
            self.stdout.write(table)

        for warning in result.diagnostics.get('warnings', []):
            self.stdout.write(self.style.WARNING(f"\n⚠️  {warning}"))

        self.stdout.write(self.style.SUCCESS(
            f"\n✓ Done in {result.diagnostics['elapsed_ms']:.1f} ms (seed {result.diagnostics['seed']})"
        ))
        if result.arguments.get('record'):
            self.stdout.write("💾 Result stored as a computation record")
