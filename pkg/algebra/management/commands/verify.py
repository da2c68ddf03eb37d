"""
Django Management Command: Verify Property Suites
=================================================
Runs the randomized property suites at a fixed seed and reports failures.

Location: algebra/management/commands/verify.py
"""

import json

import pandas as pd
from django.core.management.base import BaseCommand, CommandError

from algebra.conf import get_setting
from algebra.properties import SUITES, run_suite


class Command(BaseCommand):
    help = 'Run the randomized property suites of the algebra library'

    def add_arguments(self, parser):
        parser.add_argument(
            '--suite',
            type=str,
            choices=sorted(SUITES),
            action='append',
            default=None,
            help='Suite to run (repeatable; default: all)'
        )
        parser.add_argument(
            '--trials',
            type=int,
            default=None,
            help='Trials per suite (default: per-suite setting)'
        )
        parser.add_argument(
            '--seed',
            type=int,
            default=None,
            help='Random seed (default: ALGEBRA_DEFAULT_SEED)'
        )
        parser.add_argument(
            '--json',
            action='store_true',
            help='Print suite results as JSON'
        )

    def handle(self, *args, **options):
        names = options['suite'] or list(SUITES)
        seed = options['seed'] if options['seed'] is not None else get_setting('ALGEBRA_DEFAULT_SEED')

        if not options['json']:
            self.stdout.write("=" * 80)
            self.stdout.write("VERIFYING PROPERTY SUITES")
            self.stdout.write("=" * 80)
            self.stdout.write(f"\n🎲 Seed: {seed}")

        results = []
        for name in names:
            result = run_suite(name, options['trials'], seed)
            results.append(result)
            if options['json']:
                continue
            if result.passed:
                self.stdout.write(self.style.SUCCESS(f"   ✓ {name}: {result.checked} instances"))
            else:
                self.stdout.write(self.style.ERROR(f"   ❌ {name}: {len(result.failures)} failures"))
                for failure in result.failures[:5]:
                    self.stdout.write(f"      → {failure}")

        failed = [r for r in results if not r.passed]
        if options['json']:
            self.stdout.write(json.dumps({'seed': seed, 'suites': [r.to_json() for r in results]},
                                         sort_keys=True, indent=2))
        else:
            summary = pd.DataFrame([{'suite': r.name, 'checked': r.checked, 'failures': len(r.failures)}
                                    for r in results])
            self.stdout.write("\n📊 Summary:")
            self.stdout.write(summary.to_string(index=False))

        if failed:
            raise CommandError(f"{len(failed)} of {len(results)} suites failed")
        if not options['json']:
            self.stdout.write(self.style.SUCCESS(f"\n✓ All {len(results)} suites passed"))
