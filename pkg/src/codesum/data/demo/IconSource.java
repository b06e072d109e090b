public class IconSource {

    private Icon iconCache;
    private ClassLoader loader;
    private String iconName;
    private String bannerName;
    private String title;
    private int width;
    private int height;

    public Icon getIcon() {
        if (iconCache == null) {
            try {
                iconCache = new ImageIcon(
                    loader.getResource(iconName));
            } catch (Exception e) {
                iconCache = null;
            }
        }
        return this.iconCache;
    }

    public String getTitle() {
        return this.title;
    }

    public int getWidth() {
        return this.width;
    }

    public int getHeight() {
        return this.height;
    }

    public String getBannerName() {
        return this.bannerName;
    }

    public void setIconName(String name) {
        this.iconName = name;
    }

    public void setLoader(ClassLoader loader) {
        this.loader = loader;
    }

    public boolean hasLoader() {
        return loader != null;
    }
}
