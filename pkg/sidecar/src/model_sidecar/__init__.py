from .app import create_app
from .config import SidecarConfig, from_env

__all__ = ["create_app", "SidecarConfig", "from_env"]
