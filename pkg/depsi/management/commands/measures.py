from depsi.cli import DepsiCommand
from depsi.datasets import dumps_json
from depsi.simulation import compare_with_closed_form


class Command(DepsiCommand):
    help = 'Sample a family and compare the rank estimators with the closed-form measures'
    command_name = 'measures'

    def add_arguments(self, parser):
        parser.add_argument('--family', required=True)
        parser.add_argument('--n', type=int, required=True, help='Sample size')
        self.add_seed_argument(parser)
        self.add_output_arguments(parser, formats=('json',))

    def run(self, config):
        result = compare_with_closed_form(config['family'], config['n'], config['seed'])
        if self.verbosity >= 2:
            for name, error in sorted(result['error'].items()):
                self.stderr.write(f"{name}: estimate - closed form = {error:+.4f}")
        return dumps_json(result)
