# Shared Utilities