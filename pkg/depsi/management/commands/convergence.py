from depsi.cli import DepsiCommand
from depsi.datasets import dumps_json, frame_to_csv
from depsi.simulation import ConvergenceRow, convergence_campaign, rows_to_frame, summarize_convergence
from depsi.tasks import run_convergence_campaign


class Command(DepsiCommand):
    help = 'd_inf distance between estimated and closed-form psi over sample sizes and replicates'
    command_name = 'convergence'

    def add_arguments(self, parser):
        parser.add_argument('--family', required=True)
        parser.add_argument('--sizes', required=True, help='Comma-separated sample sizes, e.g. 100,1000,10000')
        parser.add_argument('--reps', type=int, default=10, help='Replicates per size')
        parser.add_argument('--grid', type=int, help='Grid resolution N (default: DEPSI_GRID_RESOLUTION)')
        parser.add_argument('--jobs', type=int, help='Parallel replicates (default: DEPSI_N_JOBS)')
        parser.add_argument(
            '--queue',
            action='store_true',
            help='Dispatch the campaign as a Celery task and wait for its result',
        )
        self.add_seed_argument(parser)
        self.add_output_arguments(parser, formats=('csv', 'json'))

    def run(self, config):
        fam, seed = config['family'], config['seed']
        if self.options.get('queue'):
            result = run_convergence_campaign.delay(
                str(fam), config['sizes'], config['reps'], config['grid'], seed.seed, config['jobs'],
            )
            rows = [ConvergenceRow(**row) for row in result.get()]
        else:
            rows = convergence_campaign(
                fam, config['sizes'], config['reps'], config['grid'], seed, config['jobs'],
            )

        if self.verbosity >= 2:
            self.stderr.write(summarize_convergence(rows).to_string())
        if config['format'] == 'json':
            return dumps_json({
                'family': str(fam),
                'grid': config['grid'],
                'seed': seed.seed,
                'rows': [row.to_dict() for row in rows],
            })
        return frame_to_csv(rows_to_frame(rows))
