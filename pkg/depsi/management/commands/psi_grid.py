from depsi.cli import DepsiCommand
from depsi.datasets import dumps_json, frame_to_csv, grid_to_dict, grid_to_frame, read_dataset
from depsi.families import psi_closed_form
from depsi.models import grid_from_function
from depsi.psi import estimate_psi


class Command(DepsiCommand):
    help = 'Export psi on the node grid: estimated from a CSV dataset or closed-form for a family'
    command_name = 'psi_grid'

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--input', help='CSV file with a header row')
        source.add_argument('--family', help='Closed-form psi of this family')
        parser.add_argument('--y', help='Response column (with --input)')
        parser.add_argument('--x', help='Comma-separated covariate columns (default: all but --y)')
        parser.add_argument('--grid', type=int, help='Grid resolution N (default: DEPSI_GRID_RESOLUTION)')
        parser.add_argument('--variant', choices=('dstar', 'cplain'), default='dstar')
        parser.add_argument(
            '--survival',
            action='store_true',
            help='Export the survival-anchored form of the estimate',
        )
        self.add_seed_argument(parser)
        self.add_output_arguments(parser, formats=('csv', 'json'))

    def run(self, config):
        resolution = config['grid']
        if config['family'] is not None:
            grid = grid_from_function(psi_closed_form(config['family']), resolution)
            source = str(config['family'])
        else:
            ds = read_dataset(config['input'], config['y'], config['x'])
            psi = estimate_psi(ds, config['seed'], config['variant'])
            grid = psi.to_grid(resolution, survival=self.options.get('survival', False))
            source = config['input']
        if config['format'] == 'csv':
            return frame_to_csv(grid_to_frame(grid))
        payload = grid_to_dict(grid)
        payload['source'] = str(source)
        return dumps_json(payload)
