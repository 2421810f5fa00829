# Utilities: logging and export helpers
