"""
Base service class sharing the settings instance
"""
from abc import ABC
from typing import Optional

from turnkan.config import Settings, settings


class BaseService(ABC):
    """Base service with access to application settings"""

    def __init__(self, config: Optional[Settings] = None):
        self._config = config

    @property
    def config(self) -> Settings:
        """Injected settings, or the global instance"""
        return self._config if self._config is not None else settings
