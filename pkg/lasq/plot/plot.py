import logging

import numpy as np

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from matplotlib.ticker import FuncFormatter


logger = logging.getLogger(__name__)


def _finish(fig, path):

    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    logger.info('Wrote plot %s', path)


def plot_lv_scatter(x, y, path, kappas=None, alpha=0.3, title=None):
    '''
        Scatter of the luminance variation points with the quantile curves x^kappa
    '''

    fig, axes = plt.subplots(ncols=1, nrows=1, num='LV scatter', squeeze=True)

    axes.scatter(x, y, s=2, alpha=alpha, color='b')

    # overlay the representative power-law curves
    if kappas is not None:
        grid = np.linspace(0.0, 1.0, 256)
        for kappa in kappas:
            axes.plot(grid, grid**kappa, '--', linewidth=1.0, label=r'$\kappa=%0.3f$' % kappa)
        axes.legend(loc='lower right')

    axes.plot([0, 1], [0, 1], color='k', linewidth=0.5)
    axes.set_xlim(0, 1)
    axes.set_ylim(0, 1)
    axes.set_xlabel('Low-light intensity')
    axes.set_ylabel('Normal-light intensity')
    if title:
        axes.set_title(title)

    _finish(fig, path)


def plot_kappa_histogram(kappas, path, number_bins=64):
    '''
        Density histogram of the exponents with a normal best-fit overlay
    '''

    kappas = np.asarray(kappas, dtype=np.float64)

    fig, axes = plt.subplots(ncols=1, nrows=1, num='Histogram', squeeze=True)

    # calculate and plot the histogram
    n, bins, patches = axes.hist(kappas, number_bins, density=1)

    # calculate the statistics
    mu = np.mean(kappas)
    sigma = np.std(kappas)

    # add a 'best fit' line
    if sigma > 0:
        y = ((1 / (np.sqrt(2 * np.pi) * sigma)) * np.exp(-0.5 * (1 / sigma * (bins - mu))**2))
        axes.plot(bins, y, '--')

    axes.set_xlabel(r'$\kappa$')
    axes.set_ylabel('Probability density')
    axes.set_title(r'Histogram. $\mu=%0.3f$, $\sigma=%0.3f$' % (mu, sigma))

    _finish(fig, path)


def plot_diffusion_moments(columns, path, index=0):
    '''
        Mean and variance per step: closed form, exact recursion and Monte-Carlo
    '''

    select = columns['index'] == index
    t = columns['t'][select]

    fig, axes = plt.subplots(ncols=1, nrows=2, num='Diffusion moments', sharex=True)

    axes[0].plot(t, columns['closed_mean'][select], '--', label='closed form')
    axes[0].plot(t, columns['exact_mean'][select], label='exact recursion')
    axes[0].errorbar(t, columns['mc_mean'][select], yerr=3 * columns['mc_mean_se'][select], fmt='o', label='Monte-Carlo')
    axes[0].set_ylabel('Mean')
    axes[0].legend()

    axes[1].plot(t, columns['closed_var'][select], '--')
    axes[1].plot(t, columns['exact_var'][select])
    axes[1].errorbar(t, columns['mc_var'][select], yerr=3 * columns['mc_var_se'][select], fmt='o')
    axes[1].set_ylabel('Variance')
    axes[1].set_xlabel('Step t')

    _finish(fig, path)


def plot_sweep(parameter, results, path):
    '''
        Mean PSNR and SSIM against the swept parameter
    '''

    values = np.asarray(results[parameter], dtype=np.float64)

    fig, axes = plt.subplots(ncols=1, nrows=2, num='Sweep', sharex=True)

    formatter = FuncFormatter(lambda y, _: '{:.16g}'.format(y))

    axes[0].plot(values, results['psnr_db'], 'o-', color='b', label='enhanced')
    axes[0].plot(values, results['input_psnr_db'], '--', color='k', label='input')
    axes[0].set_ylabel('PSNR (dB)')
    axes[0].legend()

    axes[1].plot(values, results['ssim'], 'o-', color='b')
    axes[1].set_ylabel('SSIM')
    axes[1].set_xlabel(parameter)
    axes[1].xaxis.set_major_formatter(formatter)

    _finish(fig, path)
