"""Alias-free wavelet feature extraction for voxel time series.

The per-voxel Mallat pipeline (:func:`extract_iterative`) and its compiled
matrix form (:func:`build_operator` / :func:`apply_operator`) give the same
result; the matrix form processes every voxel in one product.
"""

from ._backend import active as active_backend, available as available_backends, set_backend
from .detection import (ActivationMap, Spectrum, detect, fisher_c, pearson_corr,
                        select_feature_scales, spectrum)
from .dwt import WaveletPyramid, circular_convolve, decompose, downsample2, reconstruct, upsample2
from .filters import D4, HAAR, FilterPair, get_filter
from .operator import (ExtractionOperator, FormatError, ScaleMask, apply_operator, bench_compare,
                       build_operator, extract_iterative)
from .refilter import refilter_highpass, refilter_lowpass
from .synth import BlockDesign, SyntheticDataset, boxcar, generate, hrf_kernel

__version__ = "0.1.0"
