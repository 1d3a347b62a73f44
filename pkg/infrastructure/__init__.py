# Infrastructure Layer