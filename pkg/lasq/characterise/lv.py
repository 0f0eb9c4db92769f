import logging
import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from lasq.characterise.archive import write_archive, write_csv
from lasq.errors import InvalidInputError, ShapeError
from lasq.imageio.image import check_image, luminance


logger = logging.getLogger(__name__)


CLIP_EPS = 0.004
DEFAULT_QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)


@dataclass(frozen=True)
class LvPoint:
    '''
        A pixel in the luminance variation plane: (low-light, normal-light) luma
    '''

    x: float
    y: float


@dataclass(frozen=True)
class KappaSummary:
    '''
        Histogram of per-pixel exponents and the quantile curve family x^kappa_q

        kappa_q is non-decreasing in q: higher quantiles describe curves that
        brighten less.
    '''

    edges: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    quantiles: np.ndarray
    kappas: np.ndarray

    @property
    def curves(self):
        '''
            (a, kappa_q) pairs; a = 1 anchors every curve at (1, 1)
        '''

        return [(1.0, float(k)) for k in self.kappas]


def lv_arrays(low, normal):
    '''
        Flattened Y-channel intensities of a paired scan
    '''

    low = check_image(low, 'low-light image')
    normal = check_image(normal, 'normal-light image')

    if low.shape != normal.shape:
        raise ShapeError('Paired images differ in shape: %s and %s' % (low.shape, normal.shape))

    return luminance(low).ravel(), luminance(normal).ravel()


def lv_points(low, normal):
    '''
        One luminance variation point per pixel, row-major
    '''

    x, y = lv_arrays(low, normal)
    return [LvPoint(float(a), float(b)) for a, b in zip(x, y)]


def estimate_kappa(p: LvPoint, clip_eps=CLIP_EPS) -> Optional[float]:
    '''
        Exponent of the unit-anchored power law through p

            kappa = ln(y) / ln(x)

        Points with either coordinate outside [clip_eps, 1 - clip_eps] give
        no estimate.
    '''

    lo, hi = clip_eps, 1.0 - clip_eps
    if not (lo <= p.x <= hi and lo <= p.y <= hi):
        return None

    return math.log(p.y) / math.log(p.x)


def valid_mask(x, y, clip_eps=CLIP_EPS):
    lo, hi = clip_eps, 1.0 - clip_eps
    return (x >= lo) & (x <= hi) & (y >= lo) & (y <= hi)


def estimate_kappas(x, y, clip_eps=CLIP_EPS):
    '''
        Vectorised estimate_kappa over coordinate arrays, excluded points dropped
    '''

    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)

    keep = valid_mask(x, y, clip_eps)
    return np.log(y[keep]) / np.log(x[keep])


def kappa_summary(points, bins=50, quantiles=DEFAULT_QUANTILES, clip_eps=CLIP_EPS):
    '''
        Histogram and empirical quantiles of the valid exponents of points
    '''

    if int(bins) < 1:
        raise InvalidInputError('Histogram bins (%s) must be at least 1' % bins)

    quantiles = np.asarray(quantiles, dtype=np.float64)
    if np.any((quantiles <= 0) | (quantiles >= 1)):
        raise InvalidInputError('Quantiles must lie in (0, 1), got %s' % quantiles)

    x = np.array([p.x for p in points], dtype=np.float64)
    y = np.array([p.y for p in points], dtype=np.float64)

    return summarise_kappas(estimate_kappas(x, y, clip_eps), bins, quantiles)


def summarise_kappas(kappas, bins=50, quantiles=DEFAULT_QUANTILES):

    kappas = np.asarray(kappas, dtype=np.float64)
    if len(kappas) == 0:
        raise InvalidInputError('No valid points to summarise: every pixel was excluded')

    counts, edges = np.histogram(kappas, bins=int(bins))
    quantiles = np.sort(np.asarray(quantiles, dtype=np.float64))

    return KappaSummary(edges=edges, counts=counts, quantiles=quantiles, kappas=np.quantile(kappas, quantiles))


def write_lv_scan(out_dir, x, y, summary):
    '''
        Save points.csv, kappa_hist.csv, quantiles.csv and lv_scan.hdf5
    '''

    if not os.path.exists(out_dir):
        os.makedirs(out_dir)

    write_csv(os.path.join(out_dir, 'points.csv'), ['x', 'y'], zip(x, y))

    # the final row closes the last bin
    hist_rows = list(zip(summary.edges[:-1], summary.counts.tolist())) + [(summary.edges[-1], 0)]
    write_csv(os.path.join(out_dir, 'kappa_hist.csv'), ['edge', 'count'], hist_rows)

    write_csv(os.path.join(out_dir, 'quantiles.csv'), ['q', 'kappa'], zip(summary.quantiles, summary.kappas))

    fields = {  'x'             :   x,
                'y'             :   y,
                'hist_edges'    :   summary.edges,
                'hist_counts'   :   summary.counts,
                'kappa'         :   summary.kappas}

    write_archive(os.path.join(out_dir, 'lv_scan.hdf5'), fields, [['q', summary.quantiles]])
