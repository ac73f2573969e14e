from depsi.cli import DepsiCommand
from depsi.datasets import dumps_json, read_dataset
from depsi.measures import measure_report
from depsi.nearest_neighbor import indegree_bound_check, nn_index
from depsi.psi import cn_dn_gap


class Command(DepsiCommand):
    help = 'Estimate T, R^2 and Q of the response on the covariates of a CSV dataset'
    command_name = 'estimate'

    def add_arguments(self, parser):
        self.add_dataset_arguments(parser)
        self.add_seed_argument(parser)
        parser.add_argument('--grid', type=int, help='Node grid for the C_n/D_n gap (default: DEPSI_GRID_RESOLUTION)')
        parser.add_argument(
            '--diagnostics',
            action='store_true',
            help='Also report the C_n/D_n gap and the neighbour indegree bound',
        )
        self.add_output_arguments(parser, formats=('json',))

    def run(self, config):
        ds = read_dataset(config['input'], config['y'], config['x'])
        seed = config['seed']
        payload = measure_report(ds, seed).to_dict()
        payload['columns'] = {'x': list(ds.x_names), 'y': ds.y_name}
        if self.options.get('diagnostics'):
            indegree = indegree_bound_check(nn_index(ds.x, seed), ds.d)
            payload['diagnostics'] = {
                'cn_dn_gap': cn_dn_gap(ds, seed, config['grid']),
                'gap_bound': (indegree.max_indegree + 1) / ds.n,
                'indegree': indegree.to_dict(),
            }
        return dumps_json(payload)
