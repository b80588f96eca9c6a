# FeynCursor CSV emission and validation package
