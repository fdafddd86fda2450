# config/environment.py

import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Environment:
    """
    Environment overrides
    Loads OSMOFLOW_* variables from the process environment or a .env file
    """

    def __init__(self):
        self.OSMOFLOW_CONFIG = os.getenv('OSMOFLOW_CONFIG', '')
        self.OSMOFLOW_LOG_DIR = os.getenv('OSMOFLOW_LOG_DIR', '')
        self.OSMOFLOW_VERBOSE = os.getenv('OSMOFLOW_VERBOSE', '').strip().lower() in ('1', 'true', 'yes', 'on')

    def config_path(self, explicit=None):
        """CLI flag wins over OSMOFLOW_CONFIG; None when neither is set"""
        return explicit or self.OSMOFLOW_CONFIG or None

    def logs_dir(self):
        return self.OSMOFLOW_LOG_DIR or None


def get_environment():
    """Read the environment fresh (tests patch os.environ)"""
    return Environment()
