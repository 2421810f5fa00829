"""
MCP Configuration Adapter
Supports both .env files (development) and MCP configuration (tool server)

Every key may also be given with the NLSGRAPH_ prefix; the prefixed form
wins over the bare one within the same source.
"""
import os
import logging
from typing import Dict, Any, Optional, Tuple

logger = logging.getLogger(__name__)

ENV_PREFIX = "NLSGRAPH_"


def _candidates(key: str) -> Tuple[str, ...]:
    bare = key[len(ENV_PREFIX):] if key.startswith(ENV_PREFIX) else key
    return (ENV_PREFIX + bare, bare)


class MCPConfigAdapter:
    """Adapter to handle configuration from both .env and MCP sources"""

    _mcp_config: Optional[Dict[str, Any]] = None
    _initialized: bool = False

    @classmethod
    def initialize_from_mcp(cls, config: Dict[str, Any]) -> None:
        """
        Initialize configuration from the client-provided server config.
        Uppercase keys are mirrored into the environment for code that
        reads os.environ directly.
        """
        logger.info(f"Initializing configuration from MCP ({len(config)} keys)")
        cls._mcp_config = {str(k): v for k, v in config.items()}
        cls._initialized = True

        for key, value in cls._mcp_config.items():
            if key.upper() == key:
                os.environ[key] = str(value)
                logger.debug(f"Set {key} from MCP config")

    @classmethod
    def reset(cls) -> None:
        """Forget MCP-provided values (used by tests)"""
        cls._mcp_config = None
        cls._initialized = False

    @classmethod
    def get(cls, key: str, default: Optional[str] = None) -> Optional[str]:
        """
        Get configuration value with fallback order:
        1. MCP configuration (if initialized)
        2. Environment variable
        3. Default value
        """
        names = _candidates(key)
        if cls._mcp_config:
            for name in names:
                if name in cls._mcp_config:
                    return str(cls._mcp_config[name])

        for name in names:
            value = os.getenv(name)
            if value is not None:
                return value
        return default

    @classmethod
    def get_float(cls, key: str, default: float) -> float:
        value = cls.get(key)
        if value is None or not value.strip():
            return float(default)
        try:
            return float(value)
        except ValueError:
            raise ValueError(f"Configuration key {key} must be a number, got {value!r}")

    @classmethod
    def get_int(cls, key: str, default: int) -> int:
        value = cls.get_float(key, default)
        if value != int(value):
            raise ValueError(f"Configuration key {key} must be an integer, got {value!r}")
        return int(value)

    @classmethod
    def is_mcp_initialized(cls) -> bool:
        """Check if running with MCP configuration"""
        return cls._initialized

    @classmethod
    def get_config_source(cls) -> str:
        """Get the current configuration source"""
        if cls._initialized:
            return "MCP Configuration"
        elif os.path.exists('.env'):
            return ".env file"
        else:
            return "Environment variables"

# Convenience function
def get_config(key: str, default: Optional[str] = None) -> Optional[str]:
    """Get configuration value from MCP or environment"""
    return MCPConfigAdapter.get(key, default)
