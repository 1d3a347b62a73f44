# Application Handlers