from kg_path_features.settings.mining_settings.mining_settings import Diagnostic, MiningSettings

__all__ = ["Diagnostic", "MiningSettings"]
