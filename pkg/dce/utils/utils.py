from argparse import ArgumentParser

import numpy as np

from dce.utils.experiments import OBSERVERS


def positive_int(text):
    value = int(text)
    if value < 1:
        raise ValueError('expected a positive integer, got {}'.format(text))
    return value


def length_or_inf(text):
    return np.inf if text.strip().lower() in ('inf', 'infinite', 'infinity') else float(text)


def _common(parser):
    parser.add_argument('--config', type=str, default=None,
                        help='scenario yaml file (a *_gs.yaml sweep file with --grid_search)')
    parser.add_argument('--out', type=str, default=None, help='output file, stdout when omitted')
    parser.add_argument('--format', type=str, default='csv', choices=['csv', 'json'])
    parser.add_argument('--rel-tol', dest='rel_tol', type=float, default=1e-8,
                        help='relative tolerance of the kernel quadratures')
    parser.add_argument('--threads', type=positive_int, default=1)
    parser.add_argument('-v', '--verbose', action='store_true')
    parser.add_argument('-q', '--quiet', action='store_true')


def get_args(argv=None):
    parser = ArgumentParser(prog='dce', description='Mechanical response of corrugated plates to vacuum fluctuations')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    kernel = sub.add_parser('kernel', help='kernels A+- at points or on a (q, omega) grid, natural units')
    kernel.add_argument('--q', type=float, nargs='+', default=[1.])
    kernel.add_argument('--omega', type=float, nargs='+', default=[0.])
    kernel.add_argument('--H', type=length_or_inf, default=np.inf, help='plate separation, inf for one plate')

    region = sub.add_parser('region-map', help='region label on a (q, omega) grid, natural units')
    region.add_argument('--H', type=length_or_inf, default=1.)
    region.add_argument('--q-max', dest='q_max', type=float, default=10.)
    region.add_argument('--omega-max', dest='omega_max', type=float, default=10.)
    region.add_argument('--n', type=positive_int, default=200)

    scenario = sub.add_parser('scenario', help='observables of a scenario file')
    scenario.add_argument('--grid_search', action='store_true')
    scenario.add_argument('--observer', type=str, default='none', choices=OBSERVERS)
    scenario.add_argument('--scale', type=float, default=1., help='multiply every length of the scenario')

    josephson = sub.add_parser('josephson', help='static and sliding lateral force between two corrugated plates')
    josephson.add_argument('--mode', type=str, default='dc', choices=['dc', 'ac'])
    josephson.add_argument('--n', type=positive_int, default=64)
    josephson.add_argument('--velocity', type=float, nargs=2, default=[1., 0.], help='sliding velocity (m/s)')
    josephson.add_argument('--periods', type=float, default=4., help='ac: length of the time window in periods')

    capillary = sub.add_parser('capillary', help='vacuum corrections to capillary waves below a plate')
    capillary.add_argument('--H', type=float, default=None, help='separation (m)')
    capillary.add_argument('--sigma', type=float, default=None, help='surface tension (N/m)')
    capillary.add_argument('--B', type=float, default=None)

    sub.add_parser('oracle', help='run the independent check suite')

    for p in (kernel, region, scenario, josephson, capillary, sub.choices['oracle']):
        _common(p)
    return parser.parse_args(argv)
