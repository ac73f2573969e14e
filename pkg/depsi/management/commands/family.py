from depsi.cli import DepsiCommand
from depsi.datasets import dumps_json
from depsi.families import closed_form_measures, psi_parameters


class Command(DepsiCommand):
    help = 'Closed-form psi image parameters and (T, R^2, Q) of a parametric family'
    command_name = 'family'

    def add_arguments(self, parser):
        parser.add_argument('--family', required=True, help="e.g. 'gauss:r=0.6,d=1' or 'mo:a=1,b=0.4'")
        self.add_output_arguments(parser, formats=('json',))

    def run(self, config):
        fam = config['family']
        payload = {'family': str(fam), 'psi': psi_parameters(fam)}
        payload.update(closed_form_measures(fam).to_dict())
        return dumps_json(payload)
