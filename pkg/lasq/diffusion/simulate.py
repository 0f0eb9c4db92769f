import logging
import os

import numpy as np

from lasq.characterise.archive import write_archive, write_csv
from lasq.diffusion.process import forward_marginal_closed, forward_marginal_exact, forward_step
from lasq.diffusion.schedule import psi
from lasq.errors import InvalidInputError
from lasq.numerics.kernels import pairwise_sum


logger = logging.getLogger(__name__)


REPORT_COLUMNS = ['t', 'index', 'level', 'closed_mean', 'exact_mean', 'mc_mean', 'mc_mean_se',
                  'closed_var', 'exact_var', 'mc_var', 'mc_var_se', 'closed_minus_exact']


def simulation_inputs(n_levels, dim=4, guide_offset=0.5):
    '''
        Deterministic x0 and per-level guides x0 + offset * n / N
    '''

    if dim < 1:
        raise InvalidInputError('Latent dimension (%s) must be at least 1' % dim)

    x0 = np.linspace(-1.0, 1.0, dim) if dim > 1 else np.zeros(1)
    guides = [x0 + guide_offset * level / n_levels for level in range(1, n_levels + 1)]
    return x0, guides


def _simulate_chunk(x0, guides, sched, runs, rng, ceil=False):
    '''
        Iterate the guided recursion for runs trajectories, returning the
        states after every step with shape (T, runs, dim)
    '''

    state = np.broadcast_to(x0, (runs,) + x0.shape).copy()
    states = np.empty((sched.t_steps,) + state.shape)

    for t in range(1, sched.t_steps + 1):
        level = psi(t, sched.t_steps, len(guides), ceil)
        guide = np.broadcast_to(guides[level - 1], state.shape)
        state = forward_step(state, guide, t, sched, rng)
        states[t - 1] = state

    return states


def simulate_forward(sched, n_levels, runs, rng, dim=4, guide_offset=0.5, chunk_size=1024, ceil=False):
    '''
        Compare closed-form, exact-recursion and Monte-Carlo moments per step

        Trajectories are split into chunks with their own derived streams and
        reduced with pairwise sums, so the result does not depend on the
        order chunks are evaluated in. ceil selects the ceiling level map for
        the trajectories, both marginals and the level column.
    '''

    if runs < 2:
        raise InvalidInputError('Monte-Carlo needs at least 2 runs, got %s' % runs)

    x0, guides = simulation_inputs(n_levels, dim, guide_offset)

    chunks = -(-runs // int(chunk_size))
    sizes = [runs // chunks + (1 if i < runs % chunks else 0) for i in range(chunks)]

    # per-chunk raw moment sums of orders 1..4
    moments = []
    for size, stream in zip(sizes, rng.fork(chunks)):
        states = _simulate_chunk(x0, guides, sched, size, stream, ceil)
        moments.append([pairwise_sum(states**order, axis=1) for order in range(1, 5)])

    raw = [pairwise_sum(np.stack([_[order] for _ in moments]), axis=0) / runs for order in range(4)]

    mc_mean = raw[0]
    central2 = np.maximum(raw[1] - mc_mean**2, 0.0)
    mc_var = central2 * runs / (runs - 1)

    # fourth central moment for the variance standard error
    m4 = raw[3] - 4.0 * mc_mean * raw[2] + 6.0 * mc_mean**2 * raw[1] - 3.0 * mc_mean**4

    mean_se = np.sqrt(mc_var / runs)
    var_se = np.sqrt(np.maximum(m4 - mc_var**2, 0.0) / runs)

    rows = []
    for t in range(1, sched.t_steps + 1):

        closed_mean, closed_var = forward_marginal_closed(x0, guides, t, sched, ceil)
        exact_mean, exact_var = forward_marginal_exact(x0, guides, t, sched, ceil)
        level = psi(t, sched.t_steps, n_levels, ceil)

        for i in range(len(x0)):
            rows.append([t, i, level, float(closed_mean[i]), float(exact_mean[i]), float(mc_mean[t - 1, i]),
                         float(mean_se[t - 1, i]), float(closed_var), float(exact_var), float(mc_var[t - 1, i]),
                         float(var_se[t - 1, i]), float(closed_mean[i] - exact_mean[i])])

    worst = max(abs(row[11]) for row in rows)
    logger.info('Closed-form mean deviates from the exact recursion by up to %0.3e', worst)

    return rows


def report_columns(rows):
    '''
        Transpose report rows into named column arrays
    '''

    return {name: np.array([row[i] for row in rows]) for i, name in enumerate(REPORT_COLUMNS)}


def write_simulation(out_dir, rows):
    '''
        Save diffuse_sim.csv and diffuse_sim.hdf5
    '''

    if not os.path.exists(out_dir):
        os.makedirs(out_dir)

    write_csv(os.path.join(out_dir, 'diffuse_sim.csv'), REPORT_COLUMNS, rows)

    columns = report_columns(rows)
    steps = np.unique(columns['t'])
    write_archive(os.path.join(out_dir, 'diffuse_sim.hdf5'), columns, [['t', steps]])
