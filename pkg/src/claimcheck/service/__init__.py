from .app import create_app
from .config import ServiceConfig, load_config
from .store import Workspace
