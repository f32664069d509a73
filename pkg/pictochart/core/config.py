"""
Configuración global de pictochart.

Los valores por defecto de todos los módulos viven aquí; los servicios
nunca los escriben a mano. Las variables de entorno se leen después de
cargar un `.env` si existe.
"""

import os

from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.getenv("PICTOCHART_LOG_LEVEL", "INFO")
LOG_FILE = os.getenv("PICTOCHART_LOG_FILE")  # sin archivo salvo que se pida
DEFAULT_WORKERS = int(os.getenv("PICTOCHART_WORKERS", "4"))
DEFAULT_SEED = int(os.getenv("PICTOCHART_SEED", "0"))

# chart-model
DEFAULT_CANVAS = (512, 512)
DEFAULT_MARGIN_PX = 32
MIN_CANVAS_PX = 64
BAR_WIDTH_RATIO = 0.7
RATIO_DECIMALS = 12

# skeleton-render
DEFAULT_STROKE_PX = 4
SLICE_START_COLOR = (255, 0, 0)
SLICE_END_COLOR = (0, 255, 0)
BAR_LINE_COLOR = (255, 0, 0)
TREND_LINE_COLOR = (255, 0, 0)
DEFAULT_LATENT_DIMS = (32, 32)

# distance-field / fidelity-metric
REFERENCE_RESOLUTION = 512
DEFAULT_BAND_EDGES = (8.0, 24.0, 64.0)
DEFAULT_BAND_WEIGHTS = (1.0, 0.5, 0.2, 0.05)
BLUR_SIGMA = 2.0
BLUR_TRUNCATE = 3.0
EPSILON = 1e-8
POINTS_PER_BAND = 10_000
MIN_POINTS_PER_BAND = 100
EXHAUSTIVE_MAX_PX = 1024
FIELD_DUMP_CLAMP_PX = 255
FIELD_DUMP_SCALE = 256

# attention-gate
DEFAULT_BETA = 0.6

# grid-assembly
DEFAULT_GRID_COUNT = 5
SSIM_SIGMA = 1.5
SSIM_TRUNCATE = 3.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_DATA_RANGE = 255.0
