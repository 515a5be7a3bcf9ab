#!/usr/bin/env python3
"""
Configuration manager for the pi numerics services
"""

import os
import json
import logging
from pathlib import Path
from typing import List, Optional
from pydantic import BaseModel, Field
import colorama

# Initialize colorama for colored terminal output
colorama.init()

# Define colors for better logging
YELLOW = colorama.Fore.YELLOW
RED = colorama.Fore.RED
CYAN = colorama.Fore.CYAN
RESET = colorama.Fore.RESET

logger = logging.getLogger('pi_config')


class IterationPreset(BaseModel):
    """Fixed precision schedule for a known (k, leading terms) configuration"""
    k: int = Field(..., ge=1, description="Nested radical depth")
    leading_terms: int = Field(..., ge=1, description="Machin terms used to build c")
    base_precision: int = Field(..., ge=1, description="Precision offset of the schedule")
    rate_estimate: int = Field(..., ge=1, description="Digits added to the precision per increment")


def _reference_presets() -> List[IterationPreset]:
    return [
        IterationPreset(k=4, leading_terms=1, base_precision=5, rate_estimate=5),
        IterationPreset(k=4, leading_terms=2, base_precision=12, rate_estimate=10),
        IterationPreset(k=27, leading_terms=1, base_precision=25, rate_estimate=18),
    ]


class PiSettings(BaseModel):
    """Global numerics settings"""
    log_level: str = Field(default="INFO", description="Logging level")
    guard_digits: int = Field(default=7, description="Guard digits on a measured base precision")
    internal_guard_digits: int = Field(default=20, description="Extra digits for internal constants")
    reference_factor: float = Field(default=2.2, description="Reference pi digits per target digit")
    saturation_rows: int = Field(default=3, description="Identical rows that stop an iteration")
    alpha_digit_budget: int = Field(default=10_000_000, description="Largest exact alpha or B_(1,k) in digits")
    lehmer_precision: int = Field(default=15, description="Digits used for Lehmer's measure")
    default_max_m: int = Field(default=8, description="Default number of floor terms in an expansion")
    max_escalations: int = Field(default=12, description="Precision doublings before giving up on a floor")
    max_concurrent: int = Field(default=4, description="Max concurrent report rows")
    memory_threshold: float = Field(default=85.0, description="Memory usage warning threshold (%)")
    cpu_threshold: float = Field(default=90.0, description="CPU usage warning threshold (%)")
    stats_dir: Optional[str] = Field(default=None, description="Directory for run statistics")
    presets: List[IterationPreset] = Field(default_factory=_reference_presets,
                                           description="Reference precision schedules")


class ConfigManager:
    """Manager for numerics configuration"""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration manager

        Args:
            config_path: Path to JSON configuration file (optional)
        """
        if config_path is None:
            config_path = os.environ.get(
                'PI_CONFIG_PATH',
                str(Path.cwd() / 'pi_config.json')
            )

        self.config_path = config_path
        self.settings = self._load_config()

        logging.basicConfig(
            level=getattr(logging, self.settings.log_level.upper(), logging.INFO),
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

    def _load_config(self) -> PiSettings:
        """
        Load configuration from file or use defaults

        Returns:
            PiSettings object
        """
        try:
            if os.path.exists(self.config_path):
                logger.info(f"{CYAN}Loading config from {self.config_path}{RESET}")
                with open(self.config_path, 'r') as f:
                    config_data = json.load(f)
                    return PiSettings.model_validate(config_data)
            else:
                logger.debug(f"{YELLOW}Config file {self.config_path} not found, using defaults{RESET}")
                return PiSettings()
        except Exception as e:
            logger.error(f"{RED}Error loading config: {str(e)}, using defaults{RESET}")
            return PiSettings()

    def preset_for(self, k: int, leading_terms: int) -> Optional[IterationPreset]:
        """
        Get the reference schedule for a configuration

        Args:
            k: Nested radical depth
            leading_terms: Number of Machin terms building c

        Returns:
            Matching IterationPreset or None
        """
        for preset in self.settings.presets:
            if preset.k == k and preset.leading_terms == leading_terms:
                logger.debug(f"{CYAN}Using preset schedule {preset.base_precision} + "
                             f"{preset.rate_estimate}n for k={k}, terms={leading_terms}{RESET}")
                return preset
        return None


# Create singleton instance
config_manager: Optional[ConfigManager] = None


def get_config_manager() -> ConfigManager:
    """
    Get the singleton config manager instance

    Returns:
        ConfigManager instance
    """
    global config_manager
    if config_manager is None:
        config_manager = ConfigManager()
    return config_manager
