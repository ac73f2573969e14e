from depsi.cli import DepsiCommand
from depsi.datasets import dumps_json, read_dataset
from depsi.feature_selection import select_features


class Command(DepsiCommand):
    help = 'Greedy forward selection of the covariates that best predict the response (by estimated T)'
    command_name = 'featsel'

    def add_arguments(self, parser):
        self.add_dataset_arguments(parser)
        parser.add_argument('--threshold', type=float, help='Minimal gain in T per step (default: DEPSI_FEATURE_THRESHOLD)')
        parser.add_argument('--max-steps', type=int, help='Stop after this many steps')
        parser.add_argument('--jobs', type=int, help='Parallel candidate evaluations (default: DEPSI_N_JOBS)')
        self.add_seed_argument(parser)
        self.add_output_arguments(parser, formats=('json', 'table'))

    def run(self, config):
        ds = read_dataset(config['input'], config['y'], config['x'])
        trace = select_features(
            ds,
            seed=config['seed'],
            improvement_threshold=config['threshold'],
            max_steps=config['max_steps'],
            n_jobs=config['jobs'],
        )
        if config['format'] == 'table':
            return f"{trace.to_table()}\nstop: {trace.stop_reason} (threshold {trace.threshold:g})\n"
        payload = trace.to_dict()
        payload['seed'] = config['seed'].seed
        payload['response'] = ds.y_name
        return dumps_json(payload)
