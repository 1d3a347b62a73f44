# Presentation Layer