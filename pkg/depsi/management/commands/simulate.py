import pandas as pd

from depsi.cli import DepsiCommand
from depsi.datasets import dataset_to_frame, dumps_json, frame_to_csv
from depsi.families import sample, sample_psi


class Command(DepsiCommand):
    help = 'Write a seeded sample of a parametric family (copula scale) as CSV or JSON'
    command_name = 'simulate'

    def add_arguments(self, parser):
        parser.add_argument('--family', required=True)
        parser.add_argument('--n', type=int, required=True, help='Sample size')
        parser.add_argument(
            '--psi',
            action='store_true',
            help='Sample pairs from psi(A) instead of the family itself',
        )
        self.add_seed_argument(parser)
        self.add_output_arguments(parser, formats=('csv', 'json'))

    def run(self, config):
        fam, n, seed = config['family'], config['n'], config['seed']
        psi = self.options.get('psi', False)
        if psi:
            frame = pd.DataFrame(sample_psi(fam, n, seed), columns=['u', 'v'])
        else:
            frame = dataset_to_frame(sample(fam, n, seed))
        if config['format'] == 'csv':
            return frame_to_csv(frame)
        return dumps_json({
            'family': str(fam),
            'n': n,
            'seed': seed.seed,
            'psi': psi,
            'columns': list(frame.columns),
            'data': frame.to_numpy().tolist(),
        })
