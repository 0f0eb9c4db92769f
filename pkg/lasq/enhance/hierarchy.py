import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from lasq.enhance.lao import apply_gamma_map, apply_lao
from lasq.enhance.luminance import Region, full_region
from lasq.errors import InvalidInputError, ShapeError
from lasq.imageio.image import check_image
from lasq.numerics.kernels import check_grid


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridPartition:
    level: int
    grid_rows: int
    grid_cols: int
    regions: List[Region] = field(repr=False)

    def __len__(self):
        return len(self.regions)


@dataclass
class HierarchyStack:
    '''
        Enhanced images of one source image, one per hierarchy level
    '''

    source: np.ndarray = field(repr=False)
    levels: List[np.ndarray] = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, index):
        return self.levels[index]


def grid_shape(level):
    '''
        (m_n, w_n) = (2^ceil((n-1)/2), 2^floor((n-1)/2))
    '''

    if level < 1:
        raise InvalidInputError('Hierarchy level (%s) must be at least 1' % level)

    return 2**(level // 2), 2**((level - 1) // 2)


def _bands(length, count):

    # equal bands, the remainder goes to the last one
    size = length // count
    starts = [i * size for i in range(count)]
    ends = starts[1:] + [length]
    return list(zip(starts, ends))


def grid_partition(rows, cols, level):
    '''
        Split a rows x cols image into m_n x w_n non-overlapping patches

        Rows are split into m_n bands and columns into w_n bands, the
        remainder pixels joining the last band of each axis. Regions are
        listed row-major.
    '''

    m, w = grid_shape(level)

    if rows < m or cols < w:
        raise ShapeError('Image %dx%d is smaller than the level %d grid %dx%d' % (rows, cols, level, m, w))

    regions = [Region(r0, r1, c0, c1) for r0, r1 in _bands(rows, m) for c0, c1 in _bands(cols, w)]

    return GridPartition(level=level, grid_rows=m, grid_cols=w, regions=regions)


def synthesize_level(img, gamma_set, part, channels='rgb'):
    '''
        Apply the z-th operator of the set to the z-th row-major patch
    '''

    if gamma_set.level != part.level:
        raise InvalidInputError('LAO set level (%d) does not match partition level (%d)' % (gamma_set.level, part.level))
    if len(gamma_set) != len(part):
        raise InvalidInputError('LAO set holds %d operators for %d patches' % (len(gamma_set), len(part)))

    img = check_image(img)
    out = img.copy()

    for gamma, region in zip(gamma_set.values, part.regions):
        rows, cols = region.slices
        patch = img[rows, cols]
        out[rows, cols] = apply_lao(patch, full_region(*region.shape), float(gamma), channels)

    return out


def build_stack(img, gamma_hierarchy, channels='rgb'):
    '''
        Enhance the original image once per level

        Level n is synthesised from the source with its own operator set alone; levels
        never build on each other.
    '''

    img = check_image(img)
    rows, cols = img.shape[:2]

    stack = HierarchyStack(source=img)
    for gamma_set in gamma_hierarchy:
        part = grid_partition(rows, cols, gamma_set.level)
        stack.levels.append(synthesize_level(img, gamma_set, part, channels))
        logger.info('Synthesised level %d on a %dx%d grid', gamma_set.level, part.grid_rows, part.grid_cols)

    return stack


def synthesize_pixelwise(img, gamma_map, channels='rgb'):
    '''
        Per-pixel correction with the operator map clipped into [gamma_min, gamma_max]
    '''

    img = check_image(img)
    grid = check_grid(gamma_map.grid, 'gamma map')

    if grid.shape != img.shape[:2]:
        raise ShapeError('Gamma map %s does not match image %s' % (grid.shape, img.shape[:2]))

    return apply_gamma_map(img, np.clip(grid, gamma_map.gamma_min, gamma_map.gamma_max), channels)


def build_two_layer_stack(img, gamma_set, gamma_map, channels='rgb'):
    '''
        Global sampled correction followed by a per-pixel layer
    '''

    if gamma_set.level != 1:
        raise InvalidInputError('Two-layer stacks take a level 1 LAO set, got level %d' % gamma_set.level)

    img = check_image(img)
    rows, cols = img.shape[:2]

    stack = HierarchyStack(source=img)
    stack.levels.append(synthesize_level(img, gamma_set, grid_partition(rows, cols, 1), channels))
    stack.levels.append(synthesize_pixelwise(img, gamma_map, channels))

    return stack
