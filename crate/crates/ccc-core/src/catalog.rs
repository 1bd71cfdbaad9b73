// placeholder: catalog data and loaders arrive with the frozen search results
