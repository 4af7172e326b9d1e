"""orbitload: workload placement toolkit for orbital data centers.

Three capabilities, one package:

* :mod:`orbitload.suitability` scores workloads against a five-criterion
  rubric, aggregates them into tiers, and maps categories onto a phased
  capability roadmap;
* :mod:`orbitload.eo` and :mod:`orbitload.depth` are semantic-reduction
  pipelines that turn raw rasters into compact downlinkable artifacts with
  byte-exact accounting;
* :mod:`orbitload.link` converts byte counts into user-perceived latency
  over store-and-forward contact plans.
"""

from . import depth, eo, link, suitability
from .config import default_config, load_config
from .raster import ImageTile, SceneRaster, load_image_tile, load_scene_raster

__version__ = "0.1.0"

__all__ = [
    "ImageTile",
    "SceneRaster",
    "default_config",
    "depth",
    "eo",
    "link",
    "load_config",
    "load_image_tile",
    "load_scene_raster",
    "suitability",
    "__version__",
]
