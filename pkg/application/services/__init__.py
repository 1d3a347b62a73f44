# Application Services