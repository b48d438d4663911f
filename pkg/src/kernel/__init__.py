# Kernel module - Scalable contextual-geometric soft classifier
