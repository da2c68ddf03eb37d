import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from algebra.cli import EXIT_DOMAIN_ERROR, EXIT_USAGE, join_expression_values, run
from algebra.management.commands.code import Command as CodeCommand
from algebra.models import ComputationRecord


class TestRun:
    def test_teichmuller_lift(self):
        result = run(['ring', 'teich', '--p', '3', '--k', '2', '--n', '1', '--value', '2'])
        assert result.ok
        assert result.payload['lift'] == 8

    def test_ring_build(self):
        result = run(['ring', 'build', '--p', '3', '--k', '2', '--n', '2'])
        assert result.payload['ring']['h'] == [1, 0, 1]
        assert result.payload['unit_group_order'] == 72

    def test_twisted_filtration(self):
        result = run(['code', 'twisted', '--p', '3', '--k', '2', '--n', '2', '--ell', '1',
                      '--eta=-1+pi^1', '--filtration', '2'])
        assert result.ok
        assert result.payload['filtration']['d_values'] == [1, 2]
        assert result.payload['filtration']['k_values'] == ['2', '2']

    def test_twisted_filtration_with_separate_negative_eta(self):
        result = run(['code', 'twisted', '--p', '3', '--n', '2', '--ell', '1', '--eta', '-1+pi^1',
                      '--h', '0', '--filtration', '2'])
        assert result.ok, result.error
        assert result.payload['filtration']['d_values'] == [1, 2]
        assert result.payload['filtration']['k_values'] == ['2', '2']

    def test_expression_values_are_fused_with_their_flag(self):
        argv = ['--eta', '-1+pi^1', '--h', '0', '--f', '-id + sigma', '--value']
        assert join_expression_values(argv) == ['--eta=-1+pi^1', '--h', '0', '--f=-id + sigma', '--value']
        assert join_expression_values(['--eta', '--h', '0']) == ['--eta', '--h', '0']

    def test_twisted_mrd_warning(self):
        result = run(['code', 'twisted', '--p', '3', '--k', '1', '--n', '2', '--eta=-1', '--mrd', '1'])
        assert not result.payload['singleton']['is_mrd']
        assert result.diagnostics['warnings']

    def test_code_mode_is_exclusive(self):
        result = run(['code', 'gabidulin', '--p', '3', '--n', '2', '--mindist', '1', '--mrd', '1'])
        assert result.exit_code == EXIT_USAGE

    def test_skew_actions(self):
        base = ['--p', '3', '--k', '2', '--n', '2']
        annihilator = run(['skew', 'annihilator', *base, '--elements', '1'])
        assert annihilator.payload['agree']
        assert annihilator.payload['text'] == '8*id + sigma'
        matrep = run(['skew', 'matrep', *base, '--f', 'id + (1+3*xi)*sigma'])
        assert matrep.payload['matrix'] == [[2, 3], [3, 0]]
        assert matrep.payload['inner_rank'] == 1
        norm = run(['skew', 'normcheck', *base, '--f', 'id + (1+xi)*sigma', '--ell', '1'])
        assert not norm.payload['holds']
        assert norm.payload['inner_rank'] == 2

    def test_canonical_form(self):
        result = run(['bt', 'canon', '--p', '2', '--lattices', '[[4,0],[2,4]]'])
        assert result.payload['classes'][0]['matrix'] == [['2', '0'], ['1', '2']]

    def test_adjacency_and_neighbours(self):
        adjacent = run(['bt', 'adjacent', '--p', '2', '--d', '2', '--lattices', 'I,[[1,0],[1,2]]'])
        assert adjacent.payload['adjacent']
        assert adjacent.payload['distance'] == 1
        neighbours = run(['bt', 'neighbors', '--p', '2', '--d', '2', '--lattices', 'I'])
        assert len(neighbours.payload['neighbors']) == 3

    def test_hull_and_membership(self):
        lattices = ['--lattices', 'I,diag(1,t,t^2)']
        hull = run(['bt', 'hull', '--backend', 'tadic', '--d', '3', *lattices])
        assert hull.payload['size'] == 3
        member = run(['bt', 'member', '--backend', 'tadic', '--d', '3', *lattices, '--lattice', 'diag(1,1,t^3)'])
        assert member.payload['member'] is False

    def test_fiber(self):
        result = run(['mustafin', 'fiber', '--backend', 'tadic', '--d', '3', '--lattices', 'I,diag(1,t,t^2)'])
        assert result.payload['component_count'] == 3
        assert result.payload['signature_counts'] == {'concentrated': 2, 'mixed': 1}
        assert 'warnings' not in result.diagnostics

    def test_criterion(self):
        result = run(['mustafin', 'criterion', '--p', '2', '--matrices', '[[1,1],[0,0]];[[0,0],[1,2]]'])
        assert result.payload['saturated']
        assert result.payload['mp_dimension'] == 1
        assert result.payload['hull_contains_standard']
        assert len(result.table) == 2

    def test_json_document(self):
        result = run(['ring', 'build', '--p', '2', '--k', '1', '--n', '3', '--seed', '11'])
        document = json.loads(result.render_json())
        assert document['status'] == 'ok'
        assert document['diagnostics']['seed'] == 11
        assert set(document) == {'command', 'action', 'status', 'payload', 'diagnostics'}

    def test_seed_is_only_recorded(self):
        argv = ['code', 'gabidulin', '--p', '3', '--n', '2', '--filtration', '2']
        first, second = run([*argv, '--seed', '1']), run([*argv, '--seed', '2'])
        assert first.payload == second.payload
        assert (first.diagnostics['seed'], second.diagnostics['seed']) == (1, 2)


class TestErrors:
    def test_domain_error(self):
        result = run(['ring', 'build', '--p', '4', '--k', '2', '--n', '2'])
        assert result.exit_code == EXIT_DOMAIN_ERROR
        assert result.error['code'] == 'not_prime'

    def test_unknown_flag(self):
        assert run(['bt', 'hull', '--colour', 'red']).exit_code == EXIT_USAGE

    def test_missing_input(self):
        result = run(['bt', 'hull', '--p', '2'])
        assert result.exit_code == EXIT_USAGE
        assert result.error['code'] == 'usage'

    def test_unknown_group(self):
        assert run(['lattice']).exit_code == EXIT_USAGE


class TestManagementCommands:
    def test_table_output(self):
        out = StringIO()
        call_command('bt', 'hull', '--backend', 'tadic', '--d', '3', '--lattices', 'I,diag(1,t,t^2)', stdout=out)
        output = out.getvalue()
        assert 'BRUHAT-TITS BUILDING: HULL' in output
        assert '✓ Done' in output

    def test_json_output(self):
        out = StringIO()
        call_command('ring', 'teich', '--p', '3', '--k', '2', '--n', '1', '--value', '2', '--json', stdout=out)
        assert json.loads(out.getvalue())['payload']['lift'] == 8

    def test_command_line_accepts_separate_negative_eta(self, capsys):
        CodeCommand().run_from_argv(['manage.py', 'code', 'twisted', '--p', '3', '--n', '2', '--ell', '1',
                                     '--eta', '-1+pi^1', '--h', '0', '--filtration', '2',
                                     '--json', '--skip-checks'])
        document = json.loads(capsys.readouterr().out)
        assert document['payload']['filtration']['d_values'] == [1, 2]

    def test_failure_raises(self):
        with pytest.raises(CommandError) as excinfo:
            call_command('ring', 'build', '--p', '4', '--k', '2', '--n', '2', stdout=StringIO())
        assert excinfo.value.returncode == EXIT_DOMAIN_ERROR

    @pytest.mark.django_db
    def test_record(self):
        call_command('mustafin', 'mpdim', '--p', '2', '--matrices', '[[1,0],[0,1]];[[0,1],[1,0]]',
                     '--record', stdout=StringIO())
        record = ComputationRecord.objects.get()
        assert (record.command, record.action, record.status) == ('mustafin', 'mpdim', 'ok')
        assert record.payload['mp_dimension'] == 1
        assert record.arguments['matrices'] == '[[1,0],[0,1]];[[0,1],[1,0]]'

    def test_verify(self):
        out = StringIO()
        call_command('verify', '--suite', 'valuation_axioms', '--trials', '5', stdout=out)
        assert 'All 1 suites passed' in out.getvalue()
