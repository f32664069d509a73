from .raster import RasterImage
from .field import DistanceField, ForegroundDerivation, ForegroundMask, RegionMasks
from .attention import AttentionBlock, GatedWeights
from .assembly import AssemblyResult

__all__ = [
    'RasterImage',
    'DistanceField',
    'ForegroundDerivation',
    'ForegroundMask',
    'RegionMasks',
    'AttentionBlock',
    'GatedWeights',
    'AssemblyResult',
]
