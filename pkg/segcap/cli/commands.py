#  Copyright © 2021 The Segcap Authors. All Rights Reserved.
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#  ==============================================================================
"""
Sub-commands of the segcap CLI.

Every ``cmd_*`` takes the parsed flags and returns ``(exit_code, reports)``
where each Report names its file (None for stdout/--out), its columns and a
pandas DataFrame. Writing is left to the caller.

Author:
    The Segcap Authors
"""
import math
from collections import namedtuple
from dataclasses import dataclass
from typing import Optional, Tuple

from absl import flags, logging

from segcap.base.callbacks import BracketLoggingCallback
from segcap.base.channel import (ChannelParams, law_deviation, sample_segmented, split_segmented_output,
                                 uniform_distribution, uniform_random_blocks)
from segcap.base.errors import DomainError
from segcap.base.seqcore import BinaryWord
from segcap.model import asymptotics, bounds, capacity
from segcap.model.build_report import ALPHA_MODES, BuildReport
from segcap.utils.converter import ReportWriter, parallel_map

flags.DEFINE_integer('ell', 4, 'Block length ell.')
flags.DEFINE_float('p', 0.0, 'Deletion probability per block.')
flags.DEFINE_float('q', 0.0, 'Duplication probability per block.')
flags.DEFINE_float('alpha', None, 'Markov input transition probability.')
flags.DEFINE_bool('optimize_alpha', False, 'Optimize the Markov lower bound over alpha.')
flags.DEFINE_bool('uniform', False, 'Use the i.i.d. uniform input (alpha = 0.5).')
flags.DEFINE_float('tol', None, 'Tolerance: BA bracket width in bits (default 1e-6), alpha width (1e-6) '
                                'or K tail (1e-12), depending on the command.')
flags.DEFINE_integer('max_iter', capacity.DEFAULT_MAX_ITER, 'Blahut-Arimoto iteration limit.')
flags.DEFINE_integer('log_every', 1000, 'Log the Blahut-Arimoto bracket every this many iterations.')
flags.DEFINE_list('fig', ['1'], 'Figures to regenerate, any of 1,2,3,4.')
flags.DEFINE_string('out', None, 'Output file (directory for figures); stdout when unset.')
flags.DEFINE_enum('format', 'csv', ['csv', 'json'], 'Report format.')
flags.DEFINE_integer('blocks', 1000, 'Number of blocks to simulate.')
flags.DEFINE_integer('seed', 0, 'Seed of the simulation (64-bit).')
flags.DEFINE_bool('check_law', False, 'Compare simulated per-block outputs with the exact law.')
flags.DEFINE_float('grid_step', capacity.DEFAULT_GRID_STEP, 'Step of the (p, q) grids.')
flags.DEFINE_float('max_pq_sum', 1.0, 'Restrict figure 1 grids to p + q <= this value.')
flags.DEFINE_list('ells', None, 'Block lengths for figures and sweeps.')
flags.DEFINE_list('qs', None, 'Duplication probabilities for figure 2.')
flags.DEFINE_string('p_range', '0,1,0.05', 'Sweep range of p as start,stop,step (stop included).')
flags.DEFINE_string('q_range', '0,0,0.05', 'Sweep range of q as start,stop,step (stop included).')
flags.DEFINE_enum('alpha_mode', 'optimize', list(ALPHA_MODES), 'Alpha mode of sweeps.')
flags.DEFINE_bool('ba', False, 'Also run Blahut-Arimoto at every sweep point.')
flags.DEFINE_integer('jobs', 1, 'Worker processes for sweeps and simulation.')
flags.DEFINE_integer('max_enum_ell', 16, 'Largest ell enumerated exactly; memory is about '
                                         '2^ell * (2 ell + 1) * 16 bytes.')

Report = namedtuple('Report', ['name', 'columns', 'frame'])

BOUNDS_COLUMNS = ['ell', 'p', 'q', 'alpha', 'l_si_alpha', 'l_si_uniform', 'upper_u', 'upper_u_raw', 'l_no_si',
                  'l_no_si_raw', 'hb_pq', 'alpha_fallback']
CAPACITY_COLUMNS = ['ell', 'p', 'q', 'capacity_bits_per_symbol', 'lower_gap', 'upper_gap', 'iterations',
                    'converged', 'c_lower_no_si']
FIG1_COLUMNS = ['ell', 'delta_u_percent', 'delta_l_percent']
FIG2_COLUMNS = ['ell', 'q', 'delta_lsi_percent']
FIG34_COLUMNS = ['ell', 'p', 'upper_u', 'l_opt', 'l_uniform', 'c_si', 'ba_converged']
SIMULATE_COLUMNS = ['ell', 'p', 'q', 'blocks', 'seed', 'output_length', 'deletions', 'unchanged', 'duplications']
LAW_COLUMNS = ['max_deviation_sigma', 'words_checked']
CONSTANTS_COLUMNS = ['k', 'k1', 'k2', 'k1_plus_k2', 'terms', 'tail_bound']
FIGURE_ELLS = {'3': 8, '4': 2}


def _report(columns, rows, name=None):
    return Report(name, columns, ReportWriter(columns).frame(rows))


def _params(flags):
    return ChannelParams(flags.ell, flags.p, flags.q)


def _ells(flags, default):
    return [int(v) for v in flags.ells] if flags.ells else list(default)


def _ba_tol(flags):
    return capacity.DEFAULT_BA_TOL if flags.tol is None else flags.tol


def cmd_bounds(flags):
    params = _params(flags)
    chosen = [flags.alpha is not None, flags.optimize_alpha, flags.uniform]
    if sum(chosen) != 1:
        raise DomainError('bounds needs exactly one of --alpha, --optimize_alpha, --uniform.')
    alpha_mode = ALPHA_MODES[chosen.index(True)]
    report = BuildReport(params, alpha_mode, alpha=flags.alpha, tol=flags.tol or 1e-6, cap=flags.max_enum_ell)
    logging.info('Bounds at ell=%d p=%g q=%g, alpha=%g.', params.ell, params.p, params.q, report.alpha)
    return 0, [_report(BOUNDS_COLUMNS, [report.to_row()])]


def cmd_capacity(flags):
    params = _params(flags)
    solution = capacity.blahut_arimoto(params, tol=_ba_tol(flags), max_iter=flags.max_iter,
                                       callbacks=[BracketLoggingCallback(every=flags.log_every)],
                                       cap=flags.max_enum_ell)
    row = solution.to_row()
    row['c_lower_no_si'] = solution.capacity_bits_per_symbol - bounds.entropy_hb(params.p, params.q) / params.ell
    return (0 if solution.converged else 3), [_report(CAPACITY_COLUMNS, [row])]


def _fig2_point(args):
    ell, q, step = args
    return dict(ell=ell, q=q, delta_lsi_percent=100.0 * capacity.uniform_vs_optimized_gap(ell, q, step))


def _fig34_point(args):
    ell, p, ba_tol, max_iter, cap = args
    params = ChannelParams(ell, p, 0.0)
    _, l_best = bounds.optimize_alpha(params)
    correction = bounds.entropy_hb(p, 0.0) / ell
    solution = capacity.blahut_arimoto(params, tol=ba_tol, max_iter=max_iter, cap=cap)
    row = dict(ell=ell, p=p, upper_u=bounds.upper_bound_u(params, cap=cap), l_opt=l_best - correction,
               l_uniform=bounds.lower_bound_uniform(params) - correction,
               c_si=solution.capacity_bits_per_symbol, ba_converged=solution.converged)
    return row, solution.converged


def _grid(start, stop, step):
    if step <= 0:
        raise DomainError('grid step must be positive, got {}.'.format(step))
    count = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + k * step, 12) for k in range(count + 1)]


def cmd_figures(flags):
    figures = [str(f) for f in flags.fig]
    unknown = set(figures) - {'1', '2', '3', '4'}
    if unknown:
        raise DomainError('--fig {} was not found.'.format(','.join(sorted(unknown))))
    ba_tol, cap = _ba_tol(flags), flags.max_enum_ell
    reports, failures = [], 0

    if '1' in figures:
        rows = []
        for ell in _ells(flags, range(2, 9)):
            gaps = capacity.relative_gaps(ell, pq_grid_step=flags.grid_step, ba_tol=ba_tol,
                                          max_pq_sum=flags.max_pq_sum, max_iter=flags.max_iter,
                                          jobs=flags.jobs, cap=cap)
            failures += len(gaps.excluded)
            rows.append(gaps.to_row())
        reports.append(_report(FIG1_COLUMNS, rows, 'fig1'))

    if '2' in figures:
        qs = [float(v) for v in flags.qs] if flags.qs else _grid(0.05, 0.5, 0.05)
        points = [(ell, q, flags.grid_step) for ell in _ells(flags, (2, 4, 8)) for q in qs]
        reports.append(_report(FIG2_COLUMNS, parallel_map(_fig2_point, points, jobs=flags.jobs), 'fig2'))

    ells34 = [FIGURE_ELLS[f] for f in ('3', '4') if f in figures]
    if ells34:
        points = [(ell, p, ba_tol, flags.max_iter, cap) for ell in ells34 for p in _grid(0.0, 1.0, flags.grid_step)]
        rows = []
        for row, converged in parallel_map(_fig34_point, points, jobs=flags.jobs):
            if not converged:
                logging.warning('fig34: Blahut-Arimoto did not converge at ell=%d p=%g.', row['ell'], row['p'])
                failures += 1
            rows.append(row)
        reports.append(_report(FIG34_COLUMNS, rows, 'fig34'))

    if failures:
        logging.warning('%d grid points did not converge.', failures)
    return 0, reports


def _simulate_chunk(args):
    params, blocks, seed, start_index = args
    return sample_segmented(params, blocks, seed, start_index=start_index)


def cmd_simulate(flags):
    params = _params(flags)
    if flags.blocks < 1:
        raise DomainError('--blocks must be positive, got {}.'.format(flags.blocks))
    blocks = uniform_random_blocks(params.ell, flags.blocks, flags.seed)
    chunk = max(1, -(-len(blocks) // max(1, flags.jobs)))
    chunks = [(params, blocks[i:i + chunk], flags.seed, i) for i in range(0, len(blocks), chunk)]
    bits, pattern = [], []
    for output, chunk_pattern in parallel_map(_simulate_chunk, chunks, jobs=flags.jobs):
        bits.extend(output.bits)
        pattern.extend(chunk_pattern)
    row = dict(ell=params.ell, p=params.p, q=params.q, blocks=flags.blocks, seed=flags.seed,
               output_length=len(bits), deletions=pattern.count(-1), unchanged=pattern.count(0),
               duplications=pattern.count(1))
    columns = list(SIMULATE_COLUMNS)
    if flags.check_law:
        outputs = split_segmented_output(BinaryWord(tuple(bits)), pattern, params.ell)
        worst, checked = law_deviation(params, outputs, uniform_distribution(params.ell, cap=flags.max_enum_ell),
                                       cap=flags.max_enum_ell)
        row.update(max_deviation_sigma=worst, words_checked=checked)
        columns += LAW_COLUMNS
        logging.info('Largest deviation from the exact law: %.3f standard errors over %d words.', worst, checked)
    return 0, [_report(columns, [row])]


def cmd_constants(flags):
    constants = asymptotics.asymptotic_constants(flags.tol or asymptotics.K_TOL)
    row = dict(k=constants.k, k1=constants.k1, k2=constants.k2, k1_plus_k2=constants.k1 + constants.k2,
               terms=constants.terms, tail_bound=constants.tail_bound)
    return 0, [_report(CONSTANTS_COLUMNS, [row])]


@dataclass(frozen=True)
class SweepSpec:
    ells: Tuple[int, ...]
    p_range: Tuple[float, float, float]
    q_range: Tuple[float, float, float]
    alpha_mode: str
    alpha: Optional[float]
    ba: bool
    fmt: str
    out: Optional[str]
    seed: int

    def __post_init__(self):
        for name, (start, stop, step) in (('p', self.p_range), ('q', self.q_range)):
            if step <= 0:
                raise DomainError('--{}_range step must be positive.'.format(name))
            if not 0.0 <= start <= stop <= 1.0:
                raise DomainError('--{}_range must satisfy 0 <= start <= stop <= 1.'.format(name))
        if self.alpha_mode == 'fixed' and self.alpha is None:
            raise DomainError('--alpha is required with --alpha_mode=fixed.')

    @classmethod
    def from_flags(cls, flags):
        return cls(ells=tuple(_ells(flags, [flags.ell])),
                   p_range=_parse_range(flags.p_range, 'p_range'),
                   q_range=_parse_range(flags.q_range, 'q_range'),
                   alpha_mode=flags.alpha_mode, alpha=flags.alpha, ba=flags.ba,
                   fmt=flags.format, out=flags.out, seed=flags.seed)

    def points(self):
        """(ell, p, q) in grid order; points with p + q > 1 are skipped."""
        return [(ell, p, q) for ell in self.ells for p in _grid(*self.p_range) for q in _grid(*self.q_range)
                if p + q <= 1.0 + 1e-12]


def _parse_range(text, name):
    try:
        start, stop, step = (float(v) for v in text.split(','))
    except ValueError:
        raise DomainError('--{} must be start,stop,step, got {!r}.'.format(name, text))
    return start, stop, step


def _sweep_point(args):
    ell, p, q, spec, ba_tol, max_iter, cap = args
    params = ChannelParams(ell, p, q)
    row = BuildReport(params, spec.alpha_mode, alpha=spec.alpha, cap=cap).to_row()
    if spec.ba:
        solution = capacity.blahut_arimoto(params, tol=ba_tol, max_iter=max_iter, cap=cap)
        row.update(c_si=solution.capacity_bits_per_symbol, ba_converged=solution.converged)
    return row


def cmd_sweep(flags):
    spec = SweepSpec.from_flags(flags)
    points = [point + (spec, _ba_tol(flags), flags.max_iter, flags.max_enum_ell) for point in spec.points()]
    rows = parallel_map(_sweep_point, points, jobs=flags.jobs)
    columns = BOUNDS_COLUMNS + (['c_si', 'ba_converged'] if spec.ba else [])
    code = 0
    if spec.ba and not all(row['ba_converged'] for row in rows):
        logging.warning('%d sweep points did not converge.', sum(not row['ba_converged'] for row in rows))
        code = 3
    return code, [_report(columns, rows)]


COMMANDS = {
    'bounds': cmd_bounds,
    'capacity': cmd_capacity,
    'figures': cmd_figures,
    'simulate': cmd_simulate,
    'constants': cmd_constants,
    'sweep': cmd_sweep,
}
